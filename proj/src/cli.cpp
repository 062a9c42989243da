// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "pnpchain/artifact_store.hpp"
#include "pnpchain/error.hpp"
#include "pnpchain/ledger.hpp"
#include "pnpchain/miner_net.hpp"
#include "pnpchain/runtime_authority.hpp"
#include "pnpchain/workloads.hpp"

namespace pnpchain::cli {

namespace fs = std::filesystem;

namespace {

// Raised for anything the operator got wrong on the command line or in input files.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_text(const fs::path& path, std::string_view text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

nlohmann::json read_json(const fs::path& path) {
    auto j = nlohmann::json::parse(read_text(path), nullptr, false);
    if (j.is_discarded()) throw UsageError(path.string() + " is not valid JSON");
    return j;
}

// Settings resolved as flag > config file > default; PNPCHAIN_STORE beats the
// configured store_dir but not an explicit --store.
struct Settings {
    std::string config_path;
    std::string store_flag;
    std::string chain_flag;
    std::string events_flag;
    std::optional<std::uint64_t> seed, reward, window, blocks, miners, hash_rate;
    std::optional<int> difficulty;

    nlohmann::json config = nlohmann::json::object();

    void load() {
        if (config_path.empty()) return;
        config = read_json(config_path);
        if (!config.is_object()) throw UsageError("config must be a JSON object");
        static const std::set<std::string> known{"store_dir", "chain_file", "events_file", "seed",
                                                 "reward", "window_ticks", "difficulty_t", "blocks",
                                                 "miners", "hash_rate"};
        for (const auto& [key, value] : config.items()) {
            if (!known.contains(key)) throw UsageError("unknown config key '" + key + "'");
        }
    }

    template <typename T>
    T pick(const std::optional<T>& flag, const char* key, T fallback) const {
        if (flag) return *flag;
        if (config.contains(key)) {
            try {
                return config.at(key).get<T>();
            } catch (const nlohmann::json::exception&) {
                throw UsageError(std::string("config key '") + key + "' has the wrong type");
            }
        }
        return fallback;
    }

    std::string path(const std::string& flag, const char* key, const char* env, const char* fallback) const {
        if (!flag.empty()) return flag;
        if (env != nullptr) {
            if (const char* v = std::getenv(env); v != nullptr && *v != '\0') return v;
        }
        if (config.contains(key) && config.at(key).is_string()) return config.at(key).get<std::string>();
        return fallback;
    }

    std::string store_dir() const { return path(store_flag, "store_dir", "PNPCHAIN_STORE", "pnpchain-store"); }
    std::string chain_file() const { return path(chain_flag, "chain_file", nullptr, "chain.bin"); }
    std::string events_file() const { return path(events_flag, "events_file", nullptr, "events.jsonl"); }

    ledger::ChainParams chain_params() const {
        ledger::ChainParams p;
        p.reward = pick<std::uint64_t>(reward, "reward", ledger::kDefaultReward);
        p.difficulty_t = pick<int>(difficulty, "difficulty_t", ledger::kDefaultDifficulty);
        if (p.reward == 0) throw UsageError("reward must be > 0");
        if (p.difficulty_t < 0 || p.difficulty_t > 256) throw UsageError("difficulty must be in [0,256]");
        return p;
    }

    net::SimConfig sim_config() const {
        net::SimConfig c;
        const auto params = chain_params();
        c.reward = params.reward;
        c.difficulty_t = params.difficulty_t;
        c.seed = pick<std::uint64_t>(seed, "seed", 0);
        c.blocks = pick<std::uint64_t>(blocks, "blocks", 1);
        c.window_ticks = pick<std::uint64_t>(window, "window_ticks", 64);
        const std::uint64_t rate = pick<std::uint64_t>(hash_rate, "hash_rate", 64);
        // Config "miners" is either a count or a list of full miner objects.
        if (!miners && config.contains("miners") && config.at("miners").is_array()) {
            nlohmann::json j = c.to_json();
            j["miners"] = config.at("miners");
            c.miners = net::SimConfig::from_json(j).miners;
        } else {
            const std::uint64_t count = pick<std::uint64_t>(miners, "miners", 1);
            for (std::uint64_t k = 0; k < count; ++k) c.miners.push_back({fmt::format("miner-{}", k), rate});
        }
        c.check();
        return c;
    }
};

std::string describe_rewards(const std::vector<ledger::Reward>& rewards) {
    std::string out;
    for (const auto& r : rewards) out += fmt::format("{}{}={}", out.empty() ? "" : " ", r.miner_id, r.amount);
    return out;
}

nlohmann::json block_json(const ledger::Block& b) {
    nlohmann::json j;
    j["height"] = b.height;
    j["prev_hash"] = b.prev_hash.hex();
    j["jash_id"] = b.jash_id;
    j["mode"] = ledger::block_mode_name(b.mode);
    j["winner_arg"] = b.winner_arg ? nlohmann::json(b.winner_arg->str()) : nlohmann::json();
    j["winner_res"] = b.winner_res ? nlohmann::json(b.winner_res->str()) : nlohmann::json();
    j["results_root"] = b.results_root ? nlohmann::json(b.results_root->hex()) : nlohmann::json();
    j["rewards"] = nlohmann::json::array();
    for (const auto& r : b.rewards) j["rewards"].push_back({{"miner_id", r.miner_id}, {"amount", r.amount}});
    j["logical_timestamp"] = b.logical_timestamp;
    j["block_hash"] = b.block_hash.hex();
    return j;
}

int cmd_submit(const Settings& s, const std::string& source_path, const std::string& meta_path,
               const std::string& data_path, const std::string& workload_path, std::optional<double> importance,
               bool veto, std::ostream& out) {
    std::string source;
    JashMeta meta;
    std::optional<Bytes> data;
    if (!workload_path.empty()) {
        if (!source_path.empty() || !meta_path.empty()) throw UsageError("--workload replaces SOURCE and META");
        auto w = workloads::from_manifest(read_json(workload_path));
        source = std::move(w.source);
        meta = std::move(w.meta);
        if (w.data) data = std::move(w.data->bytes);
    } else {
        if (source_path.empty() || meta_path.empty()) throw UsageError("submit needs SOURCE and META (or --workload)");
        source = read_text(source_path);
        meta = JashMeta::parse(read_text(meta_path));
    }
    if (!data_path.empty()) {
        const std::string raw = read_text(data_path);
        data = Bytes(raw.begin(), raw.end());
    }

    ArtifactStore store(s.store_dir());
    ra::RuntimeAuthority authority(store);
    ra::SubmitResult result;
    try {
        result = data ? authority.submit(source, meta, ByteView(*data), importance, veto)
                      : authority.submit(source, meta, std::nullopt, importance, veto);
    } catch (const Error& e) {
        if (e.code() != Errc::duplicate_jash) throw;
        out << "jash_id: " << meta.jash_id << "\nrejected: " << e.what() << "\n";
        return kExitRejected;
    }
    out << "jash_id: " << result.jash_id << "\n" << result.report.render();
    if (result.enqueued) {
        out << "status: enqueued\n";
        return kExitOk;
    }
    out << "status: rejected (" << (result.report.compiles ? "vetoed" : "does not compile") << ")\n";
    return kExitRejected;
}

int cmd_run(const Settings& s, std::ostream& out, std::ostream& err) {
    const net::SimConfig config = s.sim_config();
    ArtifactStore store(s.store_dir());
    ra::RuntimeAuthority authority(store);
    net::Simulation sim(config, authority, store);
    bool stalled = false;
    try {
        sim.run();
    } catch (const Error& e) {
        if (e.code() != Errc::sim_stall) throw;
        err << errc_name(e.code()) << ": " << e.what() << "\n";
        stalled = true;
    }
    ledger::write_chain_file(s.chain_file(), sim.chain());
    write_text(s.events_file(), net::render_log(sim.log()));
    for (const auto& b : sim.chain()) {
        std::string winner = b.winner_arg ? b.winner_arg->str() + " -> " + b.winner_res->str()
                                          : "results_root " + b.results_root->hex();
        out << fmt::format("height {} mode {} jash {} winner {} rewards {}\n", b.height,
                           ledger::block_mode_name(b.mode), b.jash_id, winner, describe_rewards(b.rewards));
    }
    if (stalled) return kExitStall;
    const auto report = ledger::verify_chain_bytes(ledger::read_chain_file(s.chain_file()), store, config.chain_params());
    out << "verify: " << report.summary() << "\n";
    return report.ok() ? kExitOk : kExitRejected;
}

int cmd_verify(const Settings& s, std::ostream& out) {
    if (!fs::exists(s.chain_file())) throw UsageError("chain file " + s.chain_file() + " does not exist");
    ArtifactStore store(s.store_dir());
    const auto report = ledger::verify_chain_bytes(ledger::read_chain_file(s.chain_file()), store, s.chain_params());
    out << report.summary() << "\n";
    return report.ok() ? kExitOk : kExitRejected;
}

int cmd_results(const Settings& s, const std::string& jash_id, const std::string& out_path, std::ostream& out) {
    ArtifactStore store(s.store_dir());
    const auto id = store.result_set(jash_id);
    if (!id) throw UsageError("no aggregated results for jash '" + jash_id + "'");
    const std::string text = store.get_text(*id);
    if (out_path.empty()) {
        out << text << "\n";
    } else {
        write_text(out_path, text);
        out << "wrote " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_show(const Settings& s, std::optional<std::uint64_t> height, std::ostream& out) {
    if (!fs::exists(s.chain_file())) throw UsageError("chain file " + s.chain_file() + " does not exist");
    const auto chain = ledger::decode_chain(ledger::read_chain_file(s.chain_file()));
    if (height && (*height == 0 || *height > chain.size())) {
        throw UsageError(fmt::format("no block at height {} (chain has {})", *height, chain.size()));
    }
    for (const auto& b : chain) {
        if (!height || b.height == *height) out << block_json(b).dump(2) << "\n";
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"pnpchain: bounded jash programs mined as proof of useful work", "pnpchain"};
    app.require_subcommand(1);
    Settings s;
    app.add_option("--config", s.config_path, "JSON file with default settings");
    app.add_option("--store", s.store_flag, "artifact store directory (env PNPCHAIN_STORE)");
    app.add_option("--chain", s.chain_flag, "chain file");
    app.add_option("--events", s.events_flag, "event log written by run");

    std::string source_path, meta_path, data_path, workload_path;
    std::optional<double> importance;
    bool veto = false;
    auto* submit = app.add_subcommand("submit", "file a jash with the runtime authority");
    submit->add_option("source", source_path, "jash source file");
    submit->add_option("meta", meta_path, "meta JSON file");
    submit->add_option("--data", data_path, "data bundle file");
    submit->add_option("--workload", workload_path, "workload manifest instead of source and meta");
    submit->add_option("--importance", importance, "operator importance in [0,1]");
    submit->add_flag("--veto", veto, "file the jash but never publish it");

    auto* run = app.add_subcommand("run", "run the authority and simulated miners");
    run->add_option("--blocks", s.blocks, "blocks to close");
    run->add_option("--miners", s.miners, "number of generated miners");
    run->add_option("--hash-rate", s.hash_rate, "steps per tick for generated miners");
    run->add_option("--seed", s.seed, "latency seed");
    run->add_option("--window", s.window, "optimal-mode window W in ticks");

    for (auto* cmd : {run, app.add_subcommand("verify", "verify a chain file by re-execution")}) {
        cmd->add_option("--reward", s.reward, "reward R per block");
        cmd->add_option("--difficulty", s.difficulty, "classic difficulty t in leading zero bits");
    }
    auto* verify = app.get_subcommand("verify");

    std::string jash_id, out_path;
    auto* results = app.add_subcommand("results", "export the aggregated result set of a jash");
    results->add_option("jash_id", jash_id, "jash id")->required();
    results->add_option("--out", out_path, "write to a file instead of stdout");

    std::optional<std::uint64_t> height;
    auto* show = app.add_subcommand("show", "pretty-print blocks");
    show->add_option("--height", height, "only this height");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        s.load();
        if (submit->parsed()) {
            if (importance && !(*importance >= 0.0 && *importance <= 1.0)) {
                throw UsageError(fmt::format("--importance must be in [0,1], got {}", *importance));
            }
            return cmd_submit(s, source_path, meta_path, data_path, workload_path, importance, veto, out);
        }
        if (run->parsed()) return cmd_run(s, out, err);
        if (verify->parsed()) return cmd_verify(s, out);
        if (results->parsed()) return cmd_results(s, jash_id, out_path, out);
        if (show->parsed()) return cmd_show(s, height, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << errc_name(e.code()) << ": " << e.what() << "\n";
        const bool usage = e.code() == Errc::malformed_meta || e.code() == Errc::config || e.code() == Errc::io;
        return usage ? kExitUsage : kExitRejected;
    }
    return kExitUsage;
}

}  // namespace pnpchain::cli
