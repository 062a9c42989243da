// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pnpchain/artifact_store.hpp"
#include "pnpchain/bits.hpp"
#include "pnpchain/jash/classic.hpp"
#include "pnpchain/jash/meta.hpp"
#include "pnpchain/sha256.hpp"

namespace pnpchain::ledger {

inline constexpr std::uint64_t kDefaultReward = 1000;
inline constexpr int kDefaultDifficulty = 8;

enum class BlockMode { full, optimal, classic };

const char* block_mode_name(BlockMode mode) noexcept;
BlockMode block_mode_from(ExecMode mode) noexcept;

struct Reward {
    std::string miner_id;
    std::uint64_t amount = 0;

    bool operator==(const Reward&) const = default;
};

/// Serialized field order: height, prev_hash, jash_id, mode, winner_arg, winner_res,
/// results_root, rewards, logical_timestamp, then block_hash (not hashed).
/// Integers and enums are 8-byte big-endian; variable fields carry a 4-byte
/// big-endian length, 0 meaning absent; bit strings are stored as ASCII.
struct Block {
    std::uint64_t height = 0;
    Digest prev_hash{};
    std::string jash_id;
    BlockMode mode = BlockMode::classic;
    std::optional<Bits> winner_arg;
    std::optional<Bits> winner_res;
    std::optional<Digest> results_root;
    std::vector<Reward> rewards;
    std::uint64_t logical_timestamp = 0;
    Digest block_hash{};

    Bytes hashed_bytes() const;
    Bytes encode() const;
    /// Strict: trailing bytes, bad enums and malformed bit strings throw Decode.
    static Block decode(ByteView bytes);

    Digest compute_hash() const { return sha256(hashed_bytes()); }
    void seal() { block_hash = compute_hash(); }
    std::uint64_t reward_total() const noexcept;

    bool operator==(const Block&) const = default;
};

using Chain = std::vector<Block>;

/// Each block framed by a 4-byte big-endian length.
Bytes encode_chain(const Chain& chain);
/// Throws Decode with the height of the first unreadable frame.
Chain decode_chain(ByteView bytes);
void write_chain_file(const std::filesystem::path& path, const Chain& chain);
Bytes read_chain_file(const std::filesystem::path& path);

struct Submission {
    std::string miner_id;
    Bits arg;
    Bits res;
    Digest proof{};
    std::uint64_t logical_time = 0;

    /// SHA-256(arg bytes || res bytes).
    static Digest proof_of(const Bits& arg, const Bits& res);
    static Submission make(std::string miner_id, Bits arg, Bits res, std::uint64_t logical_time);
    bool proof_ok() const { return proof == proof_of(arg, res); }

    bool operator==(const Submission&) const = default;
};

/// Recomputes res for an arg; the acceptance rules use it to re-execute submissions.
using Executor = std::function<Bits(const Bits& arg)>;

struct OptimalOutcome {
    Submission winner;
    std::vector<Reward> rewards;
    std::vector<Submission> disqualified;
};

/// Lowest verified res wins R; ties by arg, logical_time, miner_id. Throws NoSubmissions
/// when no submission survives verification.
OptimalOutcome accept_optimal(const std::vector<Submission>& submissions, const JashMeta& meta,
                              const Executor& exec, std::uint64_t reward = kDefaultReward);

struct ResultEntry {
    Bits arg;
    Bits res;

    bool operator==(const ResultEntry&) const = default;
};

/// Canonical result-set file: JSON array of {"arg_hex", "res_bits"} sorted by arg.
std::string result_set_json(const std::vector<ResultEntry>& entries);
std::vector<ResultEntry> parse_result_set(std::string_view text, const JashMeta& meta);

struct FullOutcome {
    std::vector<Submission> credited;  // one per arg, sorted by arg
    Submission bonus_winner;
    std::vector<Reward> rewards;
    std::string result_set;            // canonical file text
    Digest results_root{};             // SHA-256(result_set)
    std::vector<Submission> disqualified;
};

/// First verified submission per arg is credited. floor(R/2) goes to the credited
/// submission with the most leading zeros in its proof; the rest is split evenly over
/// credited submissions, remainder to the bonus winner. Throws IncompleteCoverage.
FullOutcome accept_full(const std::vector<Submission>& submissions, const JashMeta& meta,
                        const Executor& exec, std::uint64_t reward = kDefaultReward);

/// Classic problem id and header for a height; attempt counts re-opened windows.
std::string classic_id(std::uint64_t height, std::uint64_t attempt);
std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_classic_id(std::string_view id);
Digest classic_header(const Digest& prev_hash, std::uint64_t height, std::uint64_t attempt);

struct ClassicOutcome {
    Submission winner;
    std::vector<Reward> rewards;
};

/// Classic submissions carry the full digest SHA-256(header || nonce) as their proof.
Submission classic_submission(std::string miner_id, const jash::ClassicJash& job, const Bits& nonce,
                              std::uint64_t logical_time);

/// First submission by logical time whose re-verified digest has >= t leading zero
/// bits. Throws NoQualifyingSubmission.
ClassicOutcome accept_classic(const std::vector<Submission>& submissions, const jash::ClassicJash& job,
                              int difficulty_t, std::uint64_t reward = kDefaultReward);

/// Sums rewards per miner, drops zero amounts, sorts by miner_id.
std::vector<Reward> normalize_rewards(const std::vector<Reward>& rewards);

struct ChainParams {
    std::uint64_t reward = kDefaultReward;
    int difficulty_t = kDefaultDifficulty;
};

enum class Check { decode, height, linkage, block_hash, rewards, structure, reexecution };

const char* check_name(Check check) noexcept;

struct VerifyReport {
    std::optional<std::uint64_t> invalid_height;  // lowest failing height
    std::optional<Check> failed;
    std::string detail;
    std::uint64_t blocks_checked = 0;

    bool ok() const noexcept { return !invalid_height.has_value(); }
    std::string summary() const;
};

VerifyReport verify_chain(const Chain& chain, const ArtifactStore& store, const ChainParams& params = {});
/// Verifies a chain file image; unreadable frames fail as Check::decode.
VerifyReport verify_chain_bytes(ByteView bytes, const ArtifactStore& store, const ChainParams& params = {});

}  // namespace pnpchain::ledger
