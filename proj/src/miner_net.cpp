// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/miner_net.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "pnpchain/error.hpp"
#include "pnpchain/jash/parser.hpp"

namespace pnpchain::net {

namespace {

using u128 = unsigned __int128;

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

[[noreturn]] void bad_config(const std::string& why) { throw Error(Errc::config, "bad simulation config: " + why); }

ledger::BlockMode mode_from_name(const std::string& name) {
    for (const auto m : {ledger::BlockMode::full, ledger::BlockMode::optimal, ledger::BlockMode::classic}) {
        if (name == ledger::block_mode_name(m)) return m;
    }
    throw Error(Errc::decode, "unknown block mode '" + name + "'");
}

}  // namespace

void SimConfig::check() const {
    std::set<std::string> ids;
    for (const auto& m : miners) {
        if (m.id.empty()) bad_config("miner id must be non-empty");
        if (!ids.insert(m.id).second) bad_config("duplicate miner id '" + m.id + "'");
        if (m.hash_rate == 0) bad_config("hash_rate of '" + m.id + "' must be >= 1");
    }
    if (blocks == 0) bad_config("blocks must be >= 1");
    if (window_ticks == 0) bad_config("window_ticks must be >= 1");
    if (difficulty_t < 0 || difficulty_t > 256) bad_config("difficulty_t must be in [0,256]");
    if (reward == 0) bad_config("reward must be > 0");
}

nlohmann::json SimConfig::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["blocks"] = blocks;
    j["window_ticks"] = window_ticks;
    j["difficulty_t"] = difficulty_t;
    j["reward"] = reward;
    j["miners"] = nlohmann::json::array();
    for (const auto& m : miners) {
        nlohmann::json strategy = "scan_ascending";
        if (m.strategy == StrategyKind::scan_random) strategy = {{"scan_random", m.strategy_seed}};
        j["miners"].push_back({{"id", m.id}, {"hash_rate", m.hash_rate}, {"strategy", strategy}});
    }
    return j;
}

SimConfig SimConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) bad_config("top level must be an object");
    static const std::set<std::string> known{"seed", "miners", "blocks", "window_ticks", "difficulty_t", "reward"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) bad_config("unknown key '" + key + "'");
    }
    try {
        SimConfig c;
        c.seed = j.at("seed").get<std::uint64_t>();
        c.blocks = j.at("blocks").get<std::uint64_t>();
        if (j.contains("window_ticks")) c.window_ticks = j.at("window_ticks").get<std::uint64_t>();
        if (j.contains("difficulty_t")) c.difficulty_t = j.at("difficulty_t").get<int>();
        if (j.contains("reward")) c.reward = j.at("reward").get<std::uint64_t>();
        for (const auto& m : j.at("miners")) {
            MinerConfig mc;
            mc.id = m.at("id").get<std::string>();
            mc.hash_rate = m.at("hash_rate").get<std::uint64_t>();
            const auto& s = m.contains("strategy") ? m.at("strategy") : nlohmann::json("scan_ascending");
            if (s.is_string() && s.get<std::string>() == "scan_ascending") {
                mc.strategy = StrategyKind::scan_ascending;
            } else if (s.is_object() && s.size() == 1 && s.contains("scan_random")) {
                mc.strategy = StrategyKind::scan_random;
                mc.strategy_seed = s.at("scan_random").get<std::uint64_t>();
            } else {
                bad_config("strategy must be \"scan_ascending\" or {\"scan_random\": seed}");
            }
            c.miners.push_back(std::move(mc));
        }
        c.check();
        return c;
    } catch (const nlohmann::json::exception& e) {
        bad_config(e.what());
    }
}

std::uint64_t ArgSequence::at(std::uint64_t i) const noexcept {
    const auto p = static_cast<std::uint64_t>((static_cast<u128>(mul) * i + add) % count);
    return start + stride * p;
}

ArgSequence ArgSequence::permuted(std::uint64_t seed) const {
    ArgSequence out = *this;
    if (count <= 1) return out;
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state) % count;
    for (a = a == 0 ? 1 : a; std::gcd(a, count) != 1; a = a % (count - 1) + 1) {
    }
    out.mul = a;
    out.add = splitmix64(state) % count;
    return out;
}

std::vector<ArgSequence> partition_args(const JashMeta& meta, ledger::BlockMode mode,
                                        const std::vector<MinerConfig>& miners) {
    const std::uint64_t count = meta.arg_count();
    const std::uint64_t M = miners.size();
    std::vector<ArgSequence> out;
    if (mode == ledger::BlockMode::full) {
        u128 total = 0;
        for (const auto& m : miners) total += m.hash_rate;
        u128 cumulative = 0;
        std::uint64_t begin = 0;
        for (const auto& m : miners) {
            cumulative += m.hash_rate;
            const auto end = static_cast<std::uint64_t>(static_cast<u128>(count) * cumulative / total);
            out.push_back({begin, 1, end - begin});
            begin = end;
        }
    } else {
        for (std::uint64_t k = 0; k < M; ++k) {
            out.push_back({k, M, k < count ? (count - 1 - k) / M + 1 : 0});
        }
    }
    for (std::uint64_t k = 0; k < M; ++k) {
        if (miners[k].strategy == StrategyKind::scan_random) out[k] = out[k].permuted(miners[k].strategy_seed);
    }
    return out;
}

void MinerNode::assign(std::shared_ptr<const Job> job, ArgSequence args, int difficulty_t) {
    job_ = std::move(job);
    args_ = args;
    next_ = 0;
    inflight_.reset();
    difficulty_t_ = difficulty_t;
}

void MinerNode::clear() {
    job_.reset();
    inflight_.reset();
    next_ = 0;
    args_ = {};
}

bool MinerNode::has_work() const noexcept { return job_ && (inflight_ || next_ < args_.count); }

MinerNode::TickOutput MinerNode::mine_tick(std::uint64_t tick) {
    TickOutput out;
    std::uint64_t budget = config_.hash_rate;
    while (budget > 0 && has_work()) {
        if (!inflight_) {
            const Bits arg = job_->meta().arg_bits(args_.at(next_++));
            if (job_->is_classic()) {
                const Digest d = job_->classic_jash().digest(arg);
                const jash::ExecResult result{jash::digest_prefix(d, job_->meta().m), 1, jash::HaltReason::output_stmt};
                inflight_ = InFlight{arg, result, 1, d};
            } else {
                const auto result = job_->run(arg);
                inflight_ = InFlight{arg, result, std::max<std::uint64_t>(1, result.steps_used), {}};
            }
        }
        const std::uint64_t spend = std::min(budget, inflight_->remaining);
        inflight_->remaining -= spend;
        budget -= spend;
        out.steps += spend;
        if (inflight_->remaining > 0) break;
        if (job_->is_classic()) {
            if (leading_zeros(inflight_->digest.bytes) >= difficulty_t_) {
                ledger::Submission s;
                s.miner_id = config_.id;
                s.arg = inflight_->arg;
                s.res = inflight_->result.res;
                s.proof = inflight_->digest;
                s.logical_time = tick;
                out.submissions.push_back(std::move(s));
            }
        } else {
            out.submissions.push_back(
                ledger::Submission::make(config_.id, inflight_->arg, inflight_->result.res, tick));
        }
        inflight_.reset();
    }
    return out;
}

const char* event_kind_name(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::Publish: return "Publish";
        case EventKind::Fetch: return "Fetch";
        case EventKind::Result: return "Result";
        case EventKind::CloseBlock: return "CloseBlock";
    }
    return "unknown";
}

nlohmann::json SimEvent::to_json() const {
    return {{"tick", tick}, {"seq", seq}, {"kind", event_kind_name(kind)}, {"payload", payload}};
}

std::string render_log(const std::vector<SimEvent>& log) {
    std::string out;
    for (const auto& e : log) {
        out += e.to_json().dump();
        out += '\n';
    }
    return out;
}

// A miner plus what the network last told it.
struct Simulation::Node {
    MinerNode miner;
    MinerFaults faults;
    std::size_t index = 0;
    nlohmann::json target;  // payload of the latest Publish received
    bool working = false;   // fetched the target and has an assignment
    bool done_sent = false;
};

// RA-side state of the problem currently open for mining.
struct Simulation::OpenBlock {
    ra::PublishedJash published;
    std::shared_ptr<const Job> job;
    std::uint64_t serial = 0;
    std::uint64_t publish_tick = 0;
    std::vector<ledger::Submission> received;
    std::set<std::string> done;
    std::map<std::uint64_t, std::optional<Bits>> reexecuted;
    std::set<std::uint64_t> covered;
    bool close_requested = false;

    Bits execute(const Bits& arg) {
        auto it = reexecuted.find(arg.value());
        if (it == reexecuted.end()) {
            std::optional<Bits> res;
            try {
                res = job->run(arg).res;
            } catch (const Error&) {
            }
            it = reexecuted.emplace(arg.value(), res).first;
        }
        if (!it->second) throw Error(Errc::not_validated, "arg does not execute");
        return *it->second;
    }
};

Simulation::Simulation(SimConfig config, ra::RuntimeAuthority& authority, ArtifactStore& store, FaultPlan faults)
    : config_(std::move(config)), authority_(authority), store_(store), faults_(std::move(faults)), rng_(config_.seed) {
    config_.check();
    std::sort(config_.miners.begin(), config_.miners.end(),
              [](const MinerConfig& a, const MinerConfig& b) { return a.id < b.id; });
    for (std::size_t k = 0; k < config_.miners.size(); ++k) {
        auto node = std::make_unique<Node>(Node{MinerNode(config_.miners[k]), {}, k, {}, false, false});
        if (auto it = faults_.find(config_.miners[k].id); it != faults_.end()) node->faults = it->second;
        stats_[config_.miners[k].id] = {};
        nodes_.push_back(std::move(node));
    }
}

Simulation::~Simulation() = default;

Simulation::Node& Simulation::node_for(const nlohmann::json& payload) {
    const auto& id = payload.at("miner").get_ref<const std::string&>();
    const auto it = std::find_if(nodes_.begin(), nodes_.end(), [&](const auto& n) { return n->miner.config().id == id; });
    if (it == nodes_.end()) throw Error(Errc::not_found, "unknown miner '" + id + "'");
    return **it;
}

std::uint64_t Simulation::latency() { return 1 + rng_() % kMaxLatency; }

void Simulation::schedule(std::uint64_t tick, EventKind kind, nlohmann::json payload) {
    heap_.push_back({tick, seq_++, kind, std::move(payload)});
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
}

void Simulation::publish(std::uint64_t tick, ra::PublishedJash published) {
    open_ = std::make_unique<OpenBlock>();
    open_->job = std::make_shared<const Job>(authority_.job_for(published));
    open_->serial = ++serial_;
    open_->publish_tick = tick;
    open_->published = std::move(published);
    const auto& p = open_->published;
    for (const auto& node : nodes_) {
        nlohmann::json payload{{"miner", node->miner.config().id},
                               {"serial", open_->serial},
                               {"height", p.block_height},
                               {"jash_id", p.jash_id},
                               {"mode", ledger::block_mode_name(p.mode)}};
        if (p.header) payload["header"] = p.header->hex();
        schedule(tick + latency(), EventKind::Publish, std::move(payload));
    }
    if (p.mode == ledger::BlockMode::optimal) {
        schedule(tick + config_.window_ticks, EventKind::CloseBlock,
                 {{"serial", open_->serial}, {"reason", "window"}});
    }
}

void Simulation::on_publish(const Pending& e, nlohmann::json&) {
    Node& node = node_for(e.payload);
    node.target = e.payload;
    node.working = false;
    node.done_sent = false;
    node.miner.clear();
    schedule(e.tick + latency(), EventKind::Fetch, e.payload);
}

namespace {

// A miner's own download of a published jash, re-verifying every artifact.
std::shared_ptr<const Job> fetch_job(const ArtifactStore& store, const nlohmann::json& target, bool corrupt) {
    const std::string jash_id = target.at("jash_id");
    if (target.contains("header")) {
        return std::make_shared<const Job>(Job::classic(jash::ClassicJash(
            Digest::from_hex(target.at("header").get<std::string>()), jash::ClassicJash::default_meta(jash_id))));
    }
    const auto record_id = store.jash_record(jash_id);
    if (!record_id) throw Error(Errc::not_found, "no record for '" + jash_id + "'");
    const auto record = SubmissionRecord::from_json(nlohmann::json::parse(store.get_text(*record_id)));
    Bytes source = store.get(record.source_id);
    if (corrupt) source[0] ^= 0x01;
    if (sha256(source) != record.source_id) throw Error(Errc::checksum_mismatch, "source arrived corrupted");
    Bytes data;
    if (record.data_id) data = store.get(*record.data_id);
    auto prog = jash::parse(std::string_view(reinterpret_cast<const char*>(source.data()), source.size()));
    return std::make_shared<const Job>(Job::program(jash::BoundedJash(std::move(prog), record.meta), std::move(data)));
}

}  // namespace

void Simulation::on_fetch(const Pending& e, nlohmann::json& payload) {
    Node& node = node_for(e.payload);
    if (node.target.at("serial") != e.payload.at("serial")) {
        payload["stale"] = true;
        return;
    }
    std::shared_ptr<const Job> job;
    try {
        const bool corrupt = node.faults.corrupt_fetches > 0 && !e.payload.contains("header");
        if (corrupt) --node.faults.corrupt_fetches;
        job = fetch_job(store_, e.payload, corrupt);
    } catch (const Error& err) {
        payload["ok"] = false;
        payload["error"] = errc_name(err.code());
        schedule(e.tick + 1, EventKind::Fetch, e.payload);
        return;
    }
    payload["ok"] = true;
    const auto mode = mode_from_name(e.payload.at("mode"));
    const auto parts = partition_args(job->meta(), mode, config_.miners);
    node.miner.assign(std::move(job), parts[node.index], config_.difficulty_t);
    node.working = true;
}

bool Simulation::verified(const ledger::Submission& s) {
    const JashMeta& meta = open_->job->meta();
    if (s.res.width() != meta.m || !s.proof_ok()) return false;
    try {
        meta.check_arg(s.arg);
        return open_->execute(s.arg) == s.res;
    } catch (const Error&) {
        return false;
    }
}

void Simulation::request_close(std::uint64_t tick, const std::string& reason) {
    if (open_->close_requested) return;
    open_->close_requested = true;
    schedule(tick, EventKind::CloseBlock, {{"serial", open_->serial}, {"reason", reason}});
}

void Simulation::on_result(const Pending& e, nlohmann::json& payload) {
    if (!open_ || open_->serial != e.payload.at("serial")) {
        payload["stale"] = true;
        return;
    }
    const auto mode = open_->published.mode;
    if (e.payload.contains("done")) {
        open_->done.insert(e.payload.at("miner").get<std::string>());
        if (open_->done.size() == nodes_.size() && mode != ledger::BlockMode::full) {
            request_close(e.tick + 1, "all_done");
        }
        return;
    }
    ledger::Submission s;
    try {
        s.miner_id = e.payload.at("miner");
        s.arg = Bits::parse(e.payload.at("arg").get<std::string>());
        s.res = Bits::parse(e.payload.at("res").get<std::string>());
        s.proof = Digest::from_hex(e.payload.at("proof").get<std::string>());
        s.logical_time = e.payload.at("logical_time");
    } catch (const Error&) {
        payload["malformed"] = true;
        return;
    }
    open_->received.push_back(s);
    if (mode == ledger::BlockMode::full) {
        if (verified(s)) open_->covered.insert(s.arg.value());
        if (open_->covered.size() == open_->job->meta().arg_count()) request_close(e.tick + 1, "coverage");
    } else if (mode == ledger::BlockMode::classic && !open_->close_requested) {
        const auto& job = open_->job->classic_jash();
        if (s.arg.width() == job.meta().n) {
            const Digest d = job.digest(s.arg);
            if (d == s.proof && jash::digest_prefix(d, job.meta().m) == s.res &&
                leading_zeros(d.bytes) >= config_.difficulty_t) {
                // Anything sent earlier than this arrival lands within the maximum latency.
                request_close(e.tick + kMaxLatency, "settled");
            }
        }
    }
}

void Simulation::on_close(const Pending& e, nlohmann::json& payload) {
    if (!open_ || open_->serial != e.payload.at("serial")) {
        payload["stale"] = true;
        return;
    }
    OpenBlock& ob = *open_;
    const std::uint64_t height = chain_.size() + 1;
    ledger::Block b;
    b.height = height;
    b.prev_hash = chain_.empty() ? Digest::zero() : chain_.back().block_hash;
    b.jash_id = ob.published.jash_id;
    b.mode = ob.published.mode;
    b.logical_timestamp = e.tick;
    const ledger::Executor exec = [&](const Bits& arg) { return ob.execute(arg); };
    std::optional<std::string> result_set;
    try {
        switch (b.mode) {
            case ledger::BlockMode::optimal: {
                const auto out = ledger::accept_optimal(ob.received, ob.job->meta(), exec, config_.reward);
                b.winner_arg = out.winner.arg;
                b.winner_res = out.winner.res;
                b.rewards = out.rewards;
                break;
            }
            case ledger::BlockMode::full: {
                auto out = ledger::accept_full(ob.received, ob.job->meta(), exec, config_.reward);
                b.results_root = out.results_root;
                b.rewards = out.rewards;
                result_set = std::move(out.result_set);
                break;
            }
            case ledger::BlockMode::classic: {
                const auto out = ledger::accept_classic(ob.received, ob.job->classic_jash(), config_.difficulty_t,
                                                        config_.reward);
                b.winner_arg = out.winner.arg;
                b.winner_res = out.winner.res;
                b.rewards = out.rewards;
                break;
            }
        }
    } catch (const Error& err) {
        if (err.code() != Errc::no_submissions && err.code() != Errc::no_qualifying_submission) throw;
        payload["outcome"] = errc_name(err.code());
        if (classic_attempts_[height] >= kMaxClassicAttempts) {
            log_.push_back({e.tick, e.seq, e.kind, payload});
            throw Error(Errc::sim_stall, fmt::format("no qualifying classic submission at height {} after {} windows",
                                                     height, kMaxClassicAttempts));
        }
        publish(e.tick, ra::RuntimeAuthority::classic_problem(height, b.prev_hash, classic_attempts_[height]++));
        payload["next"] = open_->published.jash_id;
        return;
    }
    b.seal();
    authority_.aggregate(b, result_set);
    payload["outcome"] = "closed";
    payload["height"] = height;
    payload["block_hash"] = b.block_hash.hex();
    closed_.push_back({b, ob.received, ob.publish_tick, e.tick});
    chain_.push_back(b);
    if (chain_.size() == config_.blocks) {
        open_.reset();
        return;
    }
    auto next = authority_.publish_next(height + 1, b.block_hash, classic_attempts_[height + 1]);
    if (next.mode == ledger::BlockMode::classic) ++classic_attempts_[height + 1];
    publish(e.tick, std::move(next));
    payload["next"] = open_->published.jash_id;
}

void Simulation::send(std::uint64_t tick, const Node& node, const ledger::Submission& s) {
    schedule(tick + latency(), EventKind::Result,
             {{"miner", s.miner_id},
              {"serial", node.target.at("serial")},
              {"jash_id", node.target.at("jash_id")},
              {"arg", s.arg.str()},
              {"res", s.res.str()},
              {"proof", s.proof.hex()},
              {"logical_time", s.logical_time}});
}

void Simulation::mine(std::uint64_t tick) {
    for (auto& node_ptr : nodes_) {
        Node& node = *node_ptr;
        if (!node.working) continue;
        if (node.miner.has_work()) {
            auto out = node.miner.mine_tick(tick);
            auto& st = stats_[node.miner.config().id];
            st.total_steps += out.steps;
            st.max_steps_in_tick = std::max(st.max_steps_in_tick, out.steps);
            for (auto& s : out.submissions) {
                ++st.executions;
                if (node.faults.wrong_res) {
                    // A classic proof is the digest itself; it stays and no longer matches res.
                    s.res = Bits(s.res.value() ^ 1, s.res.width());
                    if (!node.target.contains("header")) s.proof = ledger::Submission::proof_of(s.arg, s.res);
                }
                if (node.faults.wrong_proof) s.proof = Digest::zero();
                send(tick, node, s);
                if (node.faults.replay) send(tick, node, s);
            }
        }
        const bool full = node.target.at("mode") == "full";
        if (!full && node.miner.exhausted() && !node.done_sent) {
            node.done_sent = true;
            schedule(tick + latency(), EventKind::Result,
                     {{"miner", node.miner.config().id},
                      {"serial", node.target.at("serial")},
                      {"jash_id", node.target.at("jash_id")},
                      {"done", true}});
        }
    }
}

void Simulation::run() {
    if (!chain_.empty() || !log_.empty()) throw Error(Errc::config, "a simulation runs once");
    const auto first = authority_.publish_next(1, Digest::zero(), classic_attempts_[1]);
    if (first.mode == ledger::BlockMode::classic) ++classic_attempts_[1];
    publish(0, first);

    std::uint64_t tick = 0;
    while (chain_.size() < config_.blocks) {
        while (!heap_.empty() && heap_.front().tick == tick) {
            std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
            const Pending e = std::move(heap_.back());
            heap_.pop_back();
            nlohmann::json payload = e.payload;
            switch (e.kind) {
                case EventKind::Publish: on_publish(e, payload); break;
                case EventKind::Fetch: on_fetch(e, payload); break;
                case EventKind::Result: on_result(e, payload); break;
                case EventKind::CloseBlock: on_close(e, payload); break;
            }
            log_.push_back({e.tick, e.seq, e.kind, std::move(payload)});
            if (chain_.size() == config_.blocks) return;
        }
        mine(tick);
        const bool busy = std::any_of(nodes_.begin(), nodes_.end(),
                                      [](const auto& n) { return n->working && n->miner.has_work(); });
        if (busy) {
            ++tick;
        } else if (!heap_.empty()) {
            tick = heap_.front().tick;
        } else {
            throw Error(Errc::sim_stall, fmt::format("simulation stalled at tick {} with {} of {} blocks closed",
                                                     tick, chain_.size(), config_.blocks));
        }
    }
}

}  // namespace pnpchain::net
