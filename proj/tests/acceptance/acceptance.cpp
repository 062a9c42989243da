// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.

// Acceptance gate. One PASS/FAIL line per criterion; exit status is the number
// of failures. Tolerances and budgets are pinned below and never relaxed.
//
// usage: pnpchain_acceptance [path/to/pnpchain]   (the CLI binary, for criterion 8)

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/sha.h>

#include "pnpchain/artifact_store.hpp"
#include "pnpchain/cli.hpp"
#include "pnpchain/error.hpp"
#include "pnpchain/jash/analysis.hpp"
#include "pnpchain/jash/interpreter.hpp"
#include "pnpchain/jash/parser.hpp"
#include "pnpchain/jash/transform.hpp"
#include "pnpchain/job.hpp"
#include "pnpchain/ledger.hpp"
#include "pnpchain/miner_net.hpp"
#include "pnpchain/runtime_authority.hpp"
#include "pnpchain/sha256.hpp"
#include "pnpchain/workloads.hpp"
#include "support/fixtures.hpp"
#include "support/program_gen.hpp"
#include "support/reference_interpreter.hpp"

namespace fs = std::filesystem;
using namespace pnpchain;

namespace {

// Wall-clock budgets in seconds.
constexpr double kBudgetCollatz = 1.0;
constexpr double kBudgetTransformSuite = 60.0;
constexpr double kBudgetGranularity = 60.0;
constexpr double kBudgetDefault = 120.0;

constexpr std::uint64_t kTransformCorpus = 1200;  // at least 1000 programs
constexpr std::uint64_t kArgsPerProgram = 4;
constexpr std::uint64_t kOptimalRuns = 100;
constexpr std::uint64_t kClassicBlocks = 100;
constexpr double kTrialsLow = 128.0;   // 256 / 2
constexpr double kTrialsHigh = 512.0;  // 256 * 2
constexpr std::uint64_t kTamperBlocks = 10;
constexpr std::uint64_t kTampersPerBlock = 100;
constexpr std::uint64_t kDockingMaxPairs = 65536;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string g_cli_path;

int collatz_iterations(std::uint64_t b) {
    int k = 0;
    for (; b != 1; ++k) b = (b % 2 == 0) ? b / 2 : 3 * b + 1;
    return k;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

net::MinerConfig miner(std::string id, std::uint64_t rate, net::StrategyKind kind = net::StrategyKind::scan_ascending,
                       std::uint64_t seed = 0) {
    return {std::move(id), rate, kind, seed};
}

// --- 1 -------------------------------------------------------------------

Verdict collatz_equivalence() {
    // The while-form Collatz loop with a termination code appended, and an iteration-counting twin.
    const std::string fig2 = std::string(testing::kCollatzWhile) + "output 0b001\n";
    const std::string counting = R"(b = 37
c = 0
while (b != 1) {
  if (b % 2 == 0) {
    b = b / 2
  } else {
    b = 3 * b + 1
  }
  c = c + 1
}
output c
)";
    const int oracle = collatz_iterations(37);
    if (oracle != 21) return {false, fmt::format("direct iteration oracle gave {}", oracle)};

    std::string got30, got10;
    for (const std::uint64_t s : {30ULL, 10ULL}) {
        const auto meta = testing::make_meta("fig", 8, 3, s);
        const auto bounded = jash::transform_bounded(jash::parse(fig2), meta);
        if (!jash::validate(bounded, meta).ok()) return {false, "transformed while-form Collatz does not validate"};
        (s == 30 ? got30 : got10) = jash::execute(bounded, meta, Bits(37, 8)).res.str();
    }
    const auto cmeta = testing::make_meta("count", 8, 8, 30);
    const auto counted = jash::execute(jash::transform_bounded(jash::parse(counting), cmeta), cmeta, Bits(37, 8));

    // The generated Collatz workload reads argval instead of the literal 37.
    const auto w30 = workloads::make_collatz_jash(30);
    const auto w10 = workloads::make_collatz_jash(10);
    const auto f30 = jash::execute(jash::parse(w30.source), w30.meta, Bits(37, 8)).res.str();
    const auto f10 = jash::execute(jash::parse(w10.source), w10.meta, Bits(37, 8)).res.str();

    const bool ok = got30 == "001" && got10 == "111" && counted.res.value() == 21 && f30 == "001" && f10 == "111";
    return {ok, fmt::format("s=30 -> {}, s=10 -> {}, iterations {} (oracle {}), generated jash {}/{}", got30, got10,
                            counted.res.value(), oracle, f30, f10)};
}

// --- 2 and 3 share one corpus ---------------------------------------------

struct CorpusStats {
    std::uint64_t programs = 0, executions = 0, with_while = 0, sentinel_cases = 0;
    std::uint64_t counterexamples = 0, bound_violations = 0;
    std::string first_failure;
};

const CorpusStats& corpus() {
    static const CorpusStats stats = [] {
        CorpusStats st;
        for (std::uint64_t seed = 0; st.programs < kTransformCorpus; ++seed) {
            std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dULL + 17);
            const int n = 1 + static_cast<int>(rng() % 10);
            const int m = 1 + static_cast<int>(rng() % 12);
            const auto meta = testing::make_meta("gen", n, m, 2 + rng() % 10);
            testing::ProgramGen gen(seed, {.allow_while = true, .s = meta.s});
            const auto src = jash::make_program(gen.program());
            if (src.source_text.find("while") == std::string::npos) continue;  // the corpus is while-programs
            ++st.programs;
            ++st.with_while;
            const auto bounded = jash::transform_bounded(src, meta);
            if (!jash::validate(bounded, meta).ok()) {
                ++st.counterexamples;
                if (st.first_failure.empty()) st.first_failure = "does not validate:\n" + src.source_text;
                continue;
            }
            const auto bound = jash::complexity_bound(bounded, meta).worst_case_steps;
            for (std::uint64_t k = 0; k < kArgsPerProgram; ++k) {
                const std::uint64_t argval = rng() % (std::uint64_t{1} << n);
                const auto got = jash::execute(bounded, meta, Bits(argval, n));
                ++st.executions;
                if (got.steps_used > bound) {
                    ++st.bound_violations;
                    if (st.first_failure.empty()) st.first_failure = "bound exceeded:\n" + src.source_text;
                }
                testing::ReferenceInterpreter ref({.arg = argval, .n = n, .s = meta.s}, meta.s);
                const auto want = ref.run(src.statements);
                Bits expected;
                if (want.max_condition_checks >= meta.s) {
                    expected = meta.dnf_sentinel;  // some loop needed s or more iterations
                    ++st.sentinel_cases;
                } else if (!want.terminated) {
                    ++st.counterexamples;
                    if (st.first_failure.empty()) st.first_failure = "reference hit its step cap:\n" + src.source_text;
                    continue;
                } else {
                    expected = want.output ? Bits(mask_to(*want.output, m), m) : Bits::zeros(m);
                }
                if (got.res != expected) {
                    ++st.counterexamples;
                    if (st.first_failure.empty()) {
                        st.first_failure = fmt::format("arg {} want {} got {}:\n{}", argval, expected.str(),
                                                       got.res.str(), src.source_text);
                    }
                }
            }
        }
        return st;
    }();
    return stats;
}

Verdict transform_soundness() {
    const auto& st = corpus();
    return {st.programs >= 1000 && st.counterexamples == 0,
            fmt::format("{} while-programs, {} executions ({} hit the sentinel), {} counterexamples{}", st.programs,
                        st.executions, st.sentinel_cases, st.counterexamples,
                        st.first_failure.empty() ? "" : "; first: " + st.first_failure)};
}

Verdict bound_soundness() {
    const auto& st = corpus();
    return {st.executions > 0 && st.bound_violations == 0,
            fmt::format("{} executions, {} bound violations", st.executions, st.bound_violations)};
}

// --- 4 -------------------------------------------------------------------

Verdict granularity() {
    ArtifactStore store;
    ra::RuntimeAuthority authority(store);
    JashMeta meta = testing::make_meta("grain", 16, 1, 1);
    meta.max_arg = 47000;
    if (!authority.submit("output argval % 2\n", meta).enqueued) return {false, "submission not enqueued"};

    net::SimConfig config;
    config.seed = 4;
    config.miners = {miner("m0", 4096), miner("m1", 3000), miner("m2", 2048), miner("m3", 1024)};
    net::Simulation sim(config, authority, store);
    sim.run();
    const auto& block = sim.chain().at(0);
    if (block.mode != ledger::BlockMode::full) return {false, "first block is not full mode"};

    const auto id = store.result_set("grain");
    if (!id || block.results_root != *id) return {false, "result set not stored under results_root"};
    const auto entries = ledger::parse_result_set(store.get_text(*id), meta);
    std::set<std::uint64_t> args;
    std::uint64_t wrong = 0;
    for (const auto& e : entries) {
        args.insert(e.arg.value());
        if (e.res.value() != e.arg.value() % 2) ++wrong;
    }
    const bool dense = !args.empty() && *args.begin() == 0 && *args.rbegin() == 47000;
    const auto total = block.reward_total();
    const auto report = ledger::verify_chain(sim.chain(), store);
    const bool ok = entries.size() == 47001 && args.size() == 47001 && dense && wrong == 0 &&
                    total == ledger::kDefaultReward && report.ok();
    return {ok, fmt::format("{} results, {} distinct, {} wrong, rewards sum {} of {}, {} miners paid, verify: {}",
                            entries.size(), args.size(), wrong, total, ledger::kDefaultReward, block.rewards.size(),
                            report.summary())};
}

// --- 5 -------------------------------------------------------------------

Verdict optimal_optimality() {
    std::uint64_t mismatches = 0, res_ties = 0, total_subs = 0;
    std::string first;
    for (std::uint64_t run = 0; run < kOptimalRuns; ++run) {
        std::mt19937_64 rng(0xc0ffee + run);
        const int n = 3 + static_cast<int>(rng() % 10);  // 3..12
        const int m = 1 + static_cast<int>(rng() % 4);   // narrow res makes ties common
        const std::uint64_t a = 1 + rng() % 97, b = rng() % 101;
        ArtifactStore store;
        ra::RuntimeAuthority authority(store);
        const auto meta = testing::make_meta("opt", n, m, 1, ExecMode::optimal);
        const std::string src = fmt::format("output (argval * {} + {}) % {}\n", a, b, std::uint64_t{1} << m);
        authority.submit(src, meta);

        net::SimConfig config;
        config.seed = run;
        config.window_ticks = 16 + rng() % 64;  // long enough for one fetch and one honest result
        const std::size_t honest = 1 + rng() % 4;
        for (std::size_t k = 0; k < honest; ++k) {
            const auto kind = rng() % 2 ? net::StrategyKind::scan_random : net::StrategyKind::scan_ascending;
            config.miners.push_back(miner(fmt::format("h{}", k), 1 + rng() % 16, kind, rng()));
        }
        config.miners.push_back(miner("liar", 1 + rng() % 16));
        config.miners.push_back(miner("forger", 1 + rng() % 16));
        net::FaultPlan faults{{"liar", {true, false, rng() % 2 == 0, 0}}, {"forger", {false, true, false, 0}}};
        net::Simulation sim(config, authority, store, faults);
        sim.run();

        const auto& closed = sim.closed().at(0);
        const auto& block = closed.block;
        // Brute force over independently verified submissions.
        std::vector<const ledger::Submission*> ok;
        for (const auto& s : closed.received) {
            const std::uint64_t want = (s.arg.value() * a + b) % (std::uint64_t{1} << m);
            Bytes pre = s.arg.bytes();
            const Bytes rb = s.res.bytes();
            pre.insert(pre.end(), rb.begin(), rb.end());
            Digest proof;
            SHA256(pre.data(), pre.size(), proof.bytes.data());
            if (s.arg.width() == n && s.arg.value() < (std::uint64_t{1} << n) && s.res.width() == m &&
                s.res.value() == want && s.proof == proof) {
                ok.push_back(&s);
            }
        }
        total_subs += closed.received.size();
        bool match = false;
        if (!ok.empty()) {
            const auto best = *std::min_element(ok.begin(), ok.end(), [](auto* x, auto* y) {
                return std::tie(x->res, x->arg, x->logical_time, x->miner_id) <
                       std::tie(y->res, y->arg, y->logical_time, y->miner_id);
            });
            res_ties += std::count_if(ok.begin(), ok.end(), [&](auto* s) { return s->res == best->res; }) > 1;
            match = block.mode == ledger::BlockMode::optimal && block.winner_arg == best->arg &&
                    block.winner_res == best->res && block.rewards.size() == 1 &&
                    block.rewards[0].miner_id == best->miner_id && block.rewards[0].amount == ledger::kDefaultReward;
        }
        if (!match) {
            ++mismatches;
            if (first.empty()) {
                first = fmt::format("run {}: block {} {}->{} paid {}; {} verified of {}", run,
                                    ledger::block_mode_name(block.mode),
                                    block.winner_arg ? block.winner_arg->str() : "-",
                                    block.winner_res ? block.winner_res->str() : "-",
                                    block.rewards.empty() ? "-" : block.rewards[0].miner_id, ok.size(),
                                    closed.received.size());
            }
        }
    }
    return {mismatches == 0,
            fmt::format("{} runs, {} submissions seen, {} runs with tied minimum res, {} mismatches{}", kOptimalRuns,
                        total_subs, res_ties, mismatches, first.empty() ? "" : " (first " + first + ")")};
}

// --- 6 -------------------------------------------------------------------

Verdict classic_compat() {
    // FIPS 180-4 vectors against the library hasher.
    const bool fips = sha256(std::string_view("")).hex() ==
                          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855" &&
                      sha256(std::string_view("abc")).hex() ==
                          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad";

    ArtifactStore store;
    ra::RuntimeAuthority authority(store);
    net::SimConfig config;
    config.seed = 6;
    config.blocks = kClassicBlocks;
    config.miners = {miner("solo", 256)};
    net::Simulation sim(config, authority, store);
    sim.run();

    std::uint64_t non_classic = 0, disagreements = 0;
    double trials = 0;
    for (const auto& block : sim.chain()) {
        const auto parsed = ledger::parse_classic_id(block.jash_id);
        if (block.mode != ledger::BlockMode::classic || !parsed) {
            ++non_classic;
            continue;
        }
        // Independent scan: first nonce whose digest has at least t leading zero bits.
        const Digest header = ledger::classic_header(block.prev_hash, parsed->first, parsed->second);
        const int n = block.winner_arg->width();
        std::uint64_t nonce = 0;
        for (;; ++nonce) {
            Bytes pre(header.bytes.begin(), header.bytes.end());
            const Bytes nb = Bits(nonce, n).bytes();
            pre.insert(pre.end(), nb.begin(), nb.end());
            unsigned char d[SHA256_DIGEST_LENGTH];
            SHA256(pre.data(), pre.size(), d);
            if (d[0] == 0) break;  // t = 8 means one whole zero byte
        }
        trials += static_cast<double>(nonce + 1);
        if (block.winner_arg->value() != nonce) ++disagreements;
    }
    const double mean = trials / static_cast<double>(sim.chain().size());
    const auto report = ledger::verify_chain(sim.chain(), store, {ledger::kDefaultReward, 8});
    const bool ok = fips && sim.chain().size() == kClassicBlocks && non_classic == 0 && disagreements == 0 &&
                    mean >= kTrialsLow && mean <= kTrialsHigh && report.ok();
    return {ok, fmt::format("FIPS vectors {}, {} blocks, {} non-classic, mean trials {:.1f} in [{}, {}], "
                            "{} winner/oracle disagreements, verify: {}",
                            fips ? "match" : "MISMATCH", sim.chain().size(), non_classic, mean, kTrialsLow,
                            kTrialsHigh, disagreements, report.summary())};
}

// --- 7 -------------------------------------------------------------------

Verdict tamper_detection() {
    ArtifactStore store;
    ra::RuntimeAuthority authority(store);
    const auto collatz = workloads::make_collatz_jash(30, 4, "collatz4");
    authority.submit(collatz.source, collatz.meta);
    const auto dock = workloads::make_docking_jash(workloads::DockingSpace::of(4, 4), 9);
    authority.submit(dock.source, dock.meta, ByteView(dock.data->bytes));
    authority.submit("output (argval * 7 + 3) % 16\n", testing::make_meta("affine", 6, 4, 1, ExecMode::optimal));

    net::SimConfig config;
    config.seed = 7;
    config.blocks = kTamperBlocks;
    config.miners = {miner("a", 64), miner("b", 48), miner("c", 32)};
    net::Simulation sim(config, authority, store);
    sim.run();
    const Bytes clean = ledger::encode_chain(sim.chain());
    if (!ledger::verify_chain_bytes(clean, store).ok()) return {false, "untampered chain does not verify"};

    std::set<ledger::BlockMode> modes;
    for (const auto& b : sim.chain()) modes.insert(b.mode);

    // Frame offsets: every block is a be32 length followed by its encoding.
    std::vector<std::pair<std::size_t, std::size_t>> frames;
    for (std::size_t off = 0; off < clean.size();) {
        const std::size_t len = (std::size_t{clean[off]} << 24) | (std::size_t{clean[off + 1]} << 16) |
                                (std::size_t{clean[off + 2]} << 8) | clean[off + 3];
        frames.emplace_back(off, 4 + len);
        off += 4 + len;
    }
    std::mt19937_64 rng(77);
    std::uint64_t misses = 0, trials = 0;
    std::string first;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        for (std::uint64_t k = 0; k < kTampersPerBlock; ++k) {
            const std::size_t bit = frames[i].first * 8 + rng() % (frames[i].second * 8);
            Bytes bad = clean;
            bad[bit / 8] ^= static_cast<std::uint8_t>(0x80 >> (bit % 8));
            const auto report = ledger::verify_chain_bytes(bad, store);
            ++trials;
            if (report.ok() || report.invalid_height != i + 1) {
                ++misses;
                if (first.empty()) first = fmt::format("bit {} of block {}: {}", bit, i + 1, report.summary());
            }
        }
    }
    const bool ok = frames.size() == kTamperBlocks && misses == 0 && modes.size() == 3;
    return {ok, fmt::format("{} blocks ({} modes), {} single-bit tampers, {} misses{}", frames.size(), modes.size(),
                            trials, misses, first.empty() ? "" : "; first: " + first)};
}

// --- 8 -------------------------------------------------------------------

int invoke_cli(const std::vector<std::string>& args, const fs::path& dir) {
    if (!g_cli_path.empty()) {
        std::string cmd = "cd '" + dir.string() + "' && '" + g_cli_path + "'";
        for (const auto& a : args) cmd += " '" + a + "'";
        cmd += " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    std::vector<const char*> argv{"pnpchain"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream sink;
    const fs::path cwd = fs::current_path();
    fs::current_path(dir);
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), sink, sink);
    fs::current_path(cwd);
    return code;
}

Verdict reproducibility() {
    const fs::path root = fs::temp_directory_path() / "pnpchain-acceptance-repro";
    fs::remove_all(root);
    std::string chains[2], logs[2];
    int codes[2] = {-1, -1};
    for (int k = 0; k < 2; ++k) {
        const fs::path dir = root / std::to_string(k);
        fs::create_directories(dir);
        // Identical queues so the five blocks cover full, optimal and classic mode.
        std::ofstream(dir / "collatz.json") << R"({"generator":"collatz","s":40,"n":6,"jash_id":"collatz6"})";
        std::ofstream(dir / "dock.json") << R"({"generator":"docking","N_p":5,"N_r":10,"seed":3,"jash_id":"dock"})";
        std::ofstream(dir / "opt.json")
            << R"({"generator":"collatz","s":20,"n":7,"jash_id":"collatz-opt","mode":"optimal"})";
        for (const char* w : {"collatz.json", "dock.json", "opt.json"}) {
            if (invoke_cli({"--store", "store", "submit", "--workload", w}, dir) != cli::kExitOk) {
                return {false, fmt::format("submit {} failed", w)};
            }
        }
        codes[k] = invoke_cli({"--store", "store", "run", "--blocks", "5", "--miners", "4", "--seed", "42"}, dir);
        chains[k] = slurp(dir / "chain.bin");
        logs[k] = slurp(dir / "events.jsonl");
    }
    fs::remove_all(root);
    const bool ok = codes[0] == 0 && codes[1] == 0 && !chains[0].empty() && chains[0] == chains[1] &&
                    !logs[0].empty() && logs[0] == logs[1];
    return {ok, fmt::format("{} exit codes {}/{}, chain {} bytes {}, event log {} bytes {}",
                            g_cli_path.empty() ? "in-process" : "binary", codes[0], codes[1], chains[0].size(),
                            chains[0] == chains[1] ? "identical" : "DIFFER", logs[0].size(),
                            logs[0] == logs[1] ? "identical" : "DIFFER")};
}

// --- 9 -------------------------------------------------------------------

Verdict docking_encoding() {
    std::uint64_t shapes = 0, pairs_checked = 0, failures = 0;
    std::string first;
    auto check_shape = [&](std::uint64_t N_p, std::uint64_t N_r) {
        const auto space = workloads::DockingSpace::of(N_p, N_r);
        const std::uint64_t total = space.pairs();
        std::vector<bool> seen(total, false);
        bool ok = true;
        for (std::uint64_t p = 0; p < N_p && ok; ++p) {
            for (std::uint64_t r = 0; r < N_r && ok; ++r) {
                const Bits b = workloads::dock_encode(p, r, space);
                const std::uint64_t v = b.value();
                ok = b.width() == space.n && v < total && !seen[v] && workloads::dock_decode(b, space) ==
                                                                          std::pair<std::uint64_t, std::uint64_t>{p, r};
                if (ok) seen[v] = true;
                ++pairs_checked;
            }
        }
        ok = ok && std::all_of(seen.begin(), seen.end(), [](bool x) { return x; });
        // Widths are exact: the space does not fit in n-1 bits.
        ok = ok && (space.n == 1 || total > (std::uint64_t{1} << (space.n - 1)));
        if (total < (std::uint64_t{1} << space.n)) {
            try {
                workloads::dock_decode(Bits(total, space.n), space);
                ok = false;
            } catch (const Error&) {
            }
        }
        ++shapes;
        if (!ok) {
            ++failures;
            if (first.empty()) first = fmt::format("{}x{}", N_p, N_r);
        }
    };
    for (std::uint64_t p = 1; p <= 64; ++p) {
        for (std::uint64_t r = 1; r <= 64; ++r) check_shape(p, r);
    }
    for (const auto& [p, r] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{
             {1, kDockingMaxPairs}, {kDockingMaxPairs, 1}, {256, 256}, {255, 257}, {3, 21845}, {1000, 65}, {2, 32768}}) {
        check_shape(p, r);
    }

    // Every docking jash output over every n-bit arg lies in the outcome set.
    std::uint64_t runs = 0, bad_outputs = 0;
    std::map<std::string, std::uint64_t> histogram;
    for (const auto& [p, r] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{
             {1, 1}, {2, 3}, {5, 10}, {7, 9}, {13, 17}, {255, 257}}) {
        ArtifactStore store;
        ra::RuntimeAuthority authority(store);
        const auto w = workloads::make_docking_jash(workloads::DockingSpace::of(p, r), p * 1000 + r);
        authority.submit(w.source, w.meta, ByteView(w.data->bytes));
        const Job job = load_job(store, w.meta.jash_id);
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << w.meta.n); ++a) {
            const std::string res = job.run(Bits(a, w.meta.n)).res.str();
            ++histogram[res];
            ++runs;
            const bool in_space = a < p * r;
            const bool valid = in_space ? (res == "01" || res == "00") : res == "10";
            if (!valid) ++bad_outputs;
        }
    }
    const bool ok = failures == 0 && bad_outputs == 0;
    return {ok, fmt::format("{} shapes, {} pairs round-tripped, {} failures{}; {} jash runs "
                            "(01:{} 00:{} 10:{}), {} outside the outcome set",
                            shapes, pairs_checked, failures, first.empty() ? "" : " (first " + first + ")", runs,
                            histogram["01"], histogram["00"], histogram["10"], bad_outputs)};
}

struct Criterion {
    int number;
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = fs::absolute(argv[1]).string();
    const std::vector<Criterion> criteria{
        {1, "while/for Collatz equivalence", kBudgetCollatz, collatz_equivalence},
        {2, "transform soundness", kBudgetTransformSuite, transform_soundness},
        {3, "bound soundness", kBudgetTransformSuite, bound_soundness},
        {4, "full-mode granularity n=16 max_arg=47000", kBudgetGranularity, granularity},
        {5, "optimal-mode optimality", kBudgetDefault, optimal_optimality},
        {6, "classic back-compatibility", kBudgetDefault, classic_compat},
        {7, "tamper detection", kBudgetDefault, tamper_detection},
        {8, "reproducibility", kBudgetDefault, reproducibility},
        {9, "docking encoding", kBudgetDefault, docking_encoding},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_budget = secs < c.budget_s;
        const bool pass = v.pass && in_budget;
        failures += pass ? 0 : 1;
        std::printf("%s [%d] %s: %s (%.2fs of %.0fs budget%s)\n", pass ? "PASS" : "FAIL", c.number, c.name,
                    v.detail.c_str(), secs, c.budget_s, in_budget ? "" : ", OVER BUDGET");
        std::fflush(stdout);
    }
    std::printf("%s: %zu criteria, %d failed\n", failures == 0 ? "PASS" : "FAIL", criteria.size(), failures);
    return failures;
}
