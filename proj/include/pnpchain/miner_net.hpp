// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "pnpchain/artifact_store.hpp"
#include "pnpchain/job.hpp"
#include "pnpchain/ledger.hpp"
#include "pnpchain/runtime_authority.hpp"

namespace pnpchain::net {

inline constexpr std::uint64_t kMaxLatency = 5;
/// Classic windows re-opened at one height before the run counts as stalled.
inline constexpr std::uint64_t kMaxClassicAttempts = 4;

enum class StrategyKind { scan_ascending, scan_random };

struct MinerConfig {
    std::string id;
    std::uint64_t hash_rate = 1;  // steps per tick
    StrategyKind strategy = StrategyKind::scan_ascending;
    std::uint64_t strategy_seed = 0;
};

/// {seed, miners: [{id, hash_rate, strategy}], blocks, window_ticks, difficulty_t, reward?}
/// with strategy "scan_ascending" or {"scan_random": seed}.
struct SimConfig {
    std::uint64_t seed = 0;
    std::vector<MinerConfig> miners;
    std::uint64_t blocks = 1;
    std::uint64_t window_ticks = 64;
    int difficulty_t = ledger::kDefaultDifficulty;
    std::uint64_t reward = ledger::kDefaultReward;

    /// Throws Error(config) for duplicate ids, zero hash rates and the like.
    void check() const;
    nlohmann::json to_json() const;
    static SimConfig from_json(const nlohmann::json& j);
    ledger::ChainParams chain_params() const { return {reward, difficulty_t}; }
};

/// Args visited by one miner: start + stride * perm(i) for i in [0, count).
/// perm is the identity or the affine permutation i -> (a*i + c) mod count.
struct ArgSequence {
    std::uint64_t start = 0;
    std::uint64_t stride = 1;
    std::uint64_t count = 0;
    std::uint64_t mul = 1;
    std::uint64_t add = 0;

    std::uint64_t at(std::uint64_t i) const noexcept;
    /// Shuffled order for scan_random; the visited set is unchanged.
    ArgSequence permuted(std::uint64_t seed) const;
};

/// Full mode: contiguous ranges proportional to hash rate covering [0, arg_count) exactly.
/// Otherwise miner k takes the args congruent to k modulo the miner count.
std::vector<ArgSequence> partition_args(const JashMeta& meta, ledger::BlockMode mode,
                                        const std::vector<MinerConfig>& miners);

/// One miner's execution engine. Each tick spends at most hash_rate steps; an
/// execution costing max(1, steps_used) finishes on the tick its budget is reached.
class MinerNode {
public:
    explicit MinerNode(MinerConfig config) : config_(std::move(config)) {}

    const MinerConfig& config() const noexcept { return config_; }

    /// Replaces any current work. In classic mode only digests with at least
    /// `difficulty_t` leading zero bits are submitted.
    void assign(std::shared_ptr<const Job> job, ArgSequence args, int difficulty_t);
    void clear();
    bool has_work() const noexcept;
    bool exhausted() const noexcept { return job_ && !has_work(); }

    struct TickOutput {
        std::vector<ledger::Submission> submissions;
        std::uint64_t steps = 0;
    };
    TickOutput mine_tick(std::uint64_t tick);

private:
    struct InFlight {
        Bits arg;
        jash::ExecResult result;
        std::uint64_t remaining = 0;
        Digest digest{};  // classic only
    };

    MinerConfig config_;
    std::shared_ptr<const Job> job_;
    ArgSequence args_;
    std::uint64_t next_ = 0;
    std::optional<InFlight> inflight_;
    int difficulty_t_ = 0;
};

enum class EventKind { Publish, Fetch, Result, CloseBlock };

const char* event_kind_name(EventKind kind) noexcept;

struct SimEvent {
    std::uint64_t tick = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Publish;
    nlohmann::json payload;

    nlohmann::json to_json() const;
};

/// Event log text: one compact JSON object per line.
std::string render_log(const std::vector<SimEvent>& log);

/// Test-only misbehavior of a miner.
struct MinerFaults {
    bool wrong_res = false;       // flips the low res bit and re-derives a matching proof
    bool wrong_proof = false;     // sends a zero proof
    bool replay = false;          // sends every submission twice
    std::uint64_t corrupt_fetches = 0;  // number of fetches that arrive with a flipped bit
};

using FaultPlan = std::map<std::string, MinerFaults>;

struct ClosedBlock {
    ledger::Block block;
    std::vector<ledger::Submission> received;  // every submission for the closing problem
    std::uint64_t publish_tick = 0;
    std::uint64_t close_tick = 0;
};

struct MinerStats {
    std::uint64_t total_steps = 0;
    std::uint64_t max_steps_in_tick = 0;
    std::uint64_t executions = 0;
};

/// Deterministic discrete-event run of the RA and miners until `blocks` blocks close.
class Simulation {
public:
    Simulation(SimConfig config, ra::RuntimeAuthority& authority, ArtifactStore& store, FaultPlan faults = {});
    ~Simulation();

    /// Throws Error(sim_stall) when no event or mining work remains before all blocks close;
    /// the partial chain and log stay readable.
    void run();

    const ledger::Chain& chain() const noexcept { return chain_; }
    const std::vector<SimEvent>& log() const noexcept { return log_; }
    const std::vector<ClosedBlock>& closed() const noexcept { return closed_; }
    const std::map<std::string, MinerStats>& stats() const noexcept { return stats_; }

private:
    struct Pending {
        std::uint64_t tick;
        std::uint64_t seq;
        EventKind kind;
        nlohmann::json payload;
        bool operator>(const Pending& o) const { return std::tie(tick, seq) > std::tie(o.tick, o.seq); }
    };

    struct Node;
    struct OpenBlock;

    Node& node_for(const nlohmann::json& payload);
    void schedule(std::uint64_t tick, EventKind kind, nlohmann::json payload);
    std::uint64_t latency();
    void publish(std::uint64_t tick, ra::PublishedJash published);
    void on_publish(const Pending& e, nlohmann::json& payload);
    void on_fetch(const Pending& e, nlohmann::json& payload);
    void on_result(const Pending& e, nlohmann::json& payload);
    void on_close(const Pending& e, nlohmann::json& payload);
    void mine(std::uint64_t tick);
    void send(std::uint64_t tick, const Node& node, const ledger::Submission& s);
    void request_close(std::uint64_t tick, const std::string& reason);
    bool verified(const ledger::Submission& s);

    SimConfig config_;
    ra::RuntimeAuthority& authority_;
    ArtifactStore& store_;
    FaultPlan faults_;
    std::mt19937_64 rng_;
    std::uint64_t seq_ = 0;
    std::vector<Pending> heap_;
    std::vector<std::unique_ptr<Node>> nodes_;
    std::unique_ptr<OpenBlock> open_;
    std::map<std::uint64_t, std::uint64_t> classic_attempts_;
    std::uint64_t serial_ = 0;
    ledger::Chain chain_;
    std::vector<SimEvent> log_;
    std::vector<ClosedBlock> closed_;
    std::map<std::string, MinerStats> stats_;
};

}  // namespace pnpchain::net
