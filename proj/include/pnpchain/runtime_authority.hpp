// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pnpchain/artifact_store.hpp"
#include "pnpchain/jash/analysis.hpp"
#include "pnpchain/jash/meta.hpp"
#include "pnpchain/job.hpp"
#include "pnpchain/ledger.hpp"

namespace pnpchain::ra {

inline constexpr int kReviewSamples = 32;
inline constexpr std::uint64_t kReviewSeed = 0x9e3779b97f4a7c15ULL;

struct ReviewReport {
    bool compiles = false;
    jash::ComplexityBound bound{};
    double mean_steps = 0.0;
    double stddev_steps = 0.0;  // population deviation over the samples
    double priority = 0.0;
    bool vetoed = false;
    std::string diagnostics;    // why it did not compile, empty otherwise

    std::string render() const;
};

/// importance / (1 + log2(1 + E)) with E = mean_steps * num_args + d / 1024, clamped to [0, 1].
double priority_of(double importance, double mean_steps, std::uint64_t num_args, std::uint64_t d);

/// Parses, validates and bounds the jash, then samples kReviewSamples args from a fixed
/// seed. Never throws for a bad program: failures land in compiles/diagnostics.
ReviewReport review(std::string_view source, const JashMeta& meta, std::optional<ByteView> data = std::nullopt,
                    std::optional<double> importance = std::nullopt, bool veto = false);

struct QueueEntry {
    std::string jash_id;
    Digest record_id;
    ReviewReport report;
};

/// Stable descending sort by priority without vetoed or non-compiling entries.
std::vector<QueueEntry> prioritize(std::vector<QueueEntry> queue);

struct PublishedJash {
    std::string jash_id;
    std::uint64_t block_height = 0;
    ledger::BlockMode mode = ledger::BlockMode::classic;
    JashMeta meta;
    std::optional<Digest> source_id;
    std::optional<Digest> data_id;
    std::optional<Digest> header;  // classic only
};

struct SubmitResult {
    std::string jash_id;
    ReviewReport report;
    std::optional<Digest> record_id;  // set when filed
    bool enqueued = false;
};

/// Serialized RA state machine over an artifact store: submissions, review queue,
/// publication schedule and result aggregation.
class RuntimeAuthority {
public:
    explicit RuntimeAuthority(ArtifactStore& store);

    /// Stores source, data and record, reviews, and enqueues unless vetoed or not compiling.
    /// Without `importance` meta.importance is used. Throws DuplicateJash if the id is already filed,
    /// MalformedMeta for a broken meta or an importance outside [0, 1].
    SubmitResult submit(std::string_view source, const JashMeta& meta, std::optional<ByteView> data = std::nullopt,
                        std::optional<double> importance = std::nullopt, bool veto = false);

    /// Current schedule, highest priority first.
    std::vector<QueueEntry> schedule() const;

    /// Pops the schedule head, or a classic problem keyed by (prev_hash, height, attempt)
    /// when nothing is publishable.
    PublishedJash publish_next(std::uint64_t height, const Digest& prev_hash, std::uint64_t attempt = 0);

    /// Classic problem for a height regardless of the queue.
    static PublishedJash classic_problem(std::uint64_t height, const Digest& prev_hash, std::uint64_t attempt);

    Job job_for(const PublishedJash& published) const;

    /// Files the block's result set under its jash id and returns the store id: the winning
    /// pair for optimal mode, `full_result_set` (which must hash to results_root) for full
    /// mode, nothing for classic blocks. Throws BlockNotClosed for an unsealed block.
    std::optional<Digest> aggregate(const ledger::Block& block,
                                    std::optional<std::string_view> full_result_set = std::nullopt);

    const ArtifactStore& store() const noexcept { return store_; }

private:
    QueueEntry entry_for(const Digest& record_id) const;

    ArtifactStore& store_;
    mutable std::map<Digest, ReviewReport> reviews_;
};

}  // namespace pnpchain::ra
