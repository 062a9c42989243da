// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/ledger.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "pnpchain/error.hpp"
#include "pnpchain/job.hpp"

namespace pnpchain::ledger {

const char* block_mode_name(BlockMode mode) noexcept {
    switch (mode) {
        case BlockMode::full: return "full";
        case BlockMode::optimal: return "optimal";
        case BlockMode::classic: return "classic";
    }
    return "unknown";
}

BlockMode block_mode_from(ExecMode mode) noexcept {
    return mode == ExecMode::full ? BlockMode::full : BlockMode::optimal;
}

namespace {

constexpr std::size_t kMaxField = 1U << 20;

void put_field(Bytes& out, ByteView field) {
    append_be32(out, static_cast<std::uint32_t>(field.size()));
    out.insert(out.end(), field.begin(), field.end());
}

void put_field(Bytes& out, std::string_view text) {
    put_field(out, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void put_bits(Bytes& out, const std::optional<Bits>& bits) { put_field(out, bits ? bits->str() : std::string()); }

class Reader {
public:
    explicit Reader(ByteView bytes) : bytes_(bytes) {}

    ByteView take(std::size_t n) {
        if (n > bytes_.size() - pos_) throw Error(Errc::decode, "truncated block");
        const ByteView out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }
    std::uint64_t be(std::size_t width) {
        std::uint64_t v = 0;
        for (const std::uint8_t b : take(width)) v = v << 8 | b;
        return v;
    }
    ByteView field() {
        const std::uint64_t len = be(4);
        if (len > kMaxField) throw Error(Errc::decode, "field length out of range");
        return take(len);
    }
    std::string text() {
        const ByteView f = field();
        return std::string(f.begin(), f.end());
    }
    std::optional<Bits> bits() {
        const std::string t = text();
        if (t.empty()) return std::nullopt;
        try {
            return Bits::parse(t);
        } catch (const Error&) {
            throw Error(Errc::decode, "malformed bit string field");
        }
    }
    Digest digest() {
        Digest d;
        const ByteView raw = take(d.bytes.size());
        std::copy(raw.begin(), raw.end(), d.bytes.begin());
        return d;
    }
    bool done() const noexcept { return pos_ == bytes_.size(); }

private:
    ByteView bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

Bytes Block::hashed_bytes() const {
    Bytes out;
    append_be64(out, height);
    out.insert(out.end(), prev_hash.bytes.begin(), prev_hash.bytes.end());
    put_field(out, jash_id);
    append_be64(out, static_cast<std::uint64_t>(mode));
    put_bits(out, winner_arg);
    put_bits(out, winner_res);
    put_field(out, results_root ? ByteView(results_root->bytes) : ByteView());
    append_be64(out, rewards.size());
    for (const auto& r : rewards) {
        put_field(out, r.miner_id);
        append_be64(out, r.amount);
    }
    append_be64(out, logical_timestamp);
    return out;
}

Bytes Block::encode() const {
    Bytes out = hashed_bytes();
    out.insert(out.end(), block_hash.bytes.begin(), block_hash.bytes.end());
    return out;
}

Block Block::decode(ByteView bytes) {
    Reader in(bytes);
    Block b;
    b.height = in.be(8);
    b.prev_hash = in.digest();
    b.jash_id = in.text();
    const std::uint64_t mode = in.be(8);
    if (mode > static_cast<std::uint64_t>(BlockMode::classic)) throw Error(Errc::decode, "unknown block mode");
    b.mode = static_cast<BlockMode>(mode);
    b.winner_arg = in.bits();
    b.winner_res = in.bits();
    const ByteView root = in.field();
    if (!root.empty()) {
        if (root.size() != 32) throw Error(Errc::decode, "results_root must be 32 bytes");
        Digest d;
        std::copy(root.begin(), root.end(), d.bytes.begin());
        b.results_root = d;
    }
    const std::uint64_t count = in.be(8);
    if (count > kMaxField) throw Error(Errc::decode, "reward count out of range");
    for (std::uint64_t i = 0; i < count; ++i) {
        Reward r;
        r.miner_id = in.text();
        r.amount = in.be(8);
        b.rewards.push_back(std::move(r));
    }
    b.logical_timestamp = in.be(8);
    b.block_hash = in.digest();
    if (!in.done()) throw Error(Errc::decode, "trailing bytes after block");
    return b;
}

std::uint64_t Block::reward_total() const noexcept {
    std::uint64_t total = 0;
    for (const auto& r : rewards) {
        if (__builtin_add_overflow(total, r.amount, &total)) return UINT64_MAX;
    }
    return total;
}

Bytes encode_chain(const Chain& chain) {
    Bytes out;
    for (const auto& block : chain) {
        const Bytes b = block.encode();
        append_be32(out, static_cast<std::uint32_t>(b.size()));
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

namespace {

// Decodes as many whole frames as possible; `error` names the first unreadable one.
Chain decode_prefix(ByteView bytes, std::string& error) {
    Chain chain;
    Reader in(bytes);
    while (!in.done()) {
        try {
            chain.push_back(Block::decode(in.field()));
        } catch (const Error& e) {
            error = e.what();
            break;
        }
    }
    return chain;
}

}  // namespace

Chain decode_chain(ByteView bytes) {
    std::string error;
    Chain chain = decode_prefix(bytes, error);
    if (!error.empty()) {
        throw Error(Errc::decode, fmt::format("block at height {}: {}", chain.size() + 1, error));
    }
    return chain;
}

void write_chain_file(const std::filesystem::path& path, const Chain& chain) {
    const Bytes bytes = encode_chain(chain);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Bytes read_chain_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot read " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Digest Submission::proof_of(const Bits& arg, const Bits& res) {
    Bytes input = arg.bytes();
    const Bytes r = res.bytes();
    input.insert(input.end(), r.begin(), r.end());
    return sha256(input);
}

Submission Submission::make(std::string miner_id, Bits arg, Bits res, std::uint64_t logical_time) {
    Submission s;
    s.proof = proof_of(arg, res);
    s.miner_id = std::move(miner_id);
    s.arg = arg;
    s.res = res;
    s.logical_time = logical_time;
    return s;
}

std::vector<Reward> normalize_rewards(const std::vector<Reward>& rewards) {
    std::map<std::string, std::uint64_t> sums;
    for (const auto& r : rewards) sums[r.miner_id] += r.amount;
    std::vector<Reward> out;
    for (const auto& [miner, amount] : sums) {
        if (amount > 0) out.push_back({miner, amount});
    }
    return out;
}

namespace {

// Re-executes each distinct arg at most once.
class Verifier {
public:
    Verifier(const JashMeta& meta, const Executor& exec) : meta_(meta), exec_(exec) {}

    bool ok(const Submission& s) {
        if (s.res.width() != meta_.m || !s.proof_ok()) return false;
        try {
            meta_.check_arg(s.arg);
        } catch (const Error&) {
            return false;
        }
        auto it = cache_.find(s.arg.value());
        if (it == cache_.end()) {
            std::optional<Bits> res;
            try {
                res = exec_(s.arg);
            } catch (const Error&) {
            }
            it = cache_.emplace(s.arg.value(), res).first;
        }
        return it->second && *it->second == s.res;
    }

private:
    const JashMeta& meta_;
    const Executor& exec_;
    std::map<std::uint64_t, std::optional<Bits>> cache_;
};

auto arrival_key(const Submission& s) { return std::tie(s.logical_time, s.miner_id); }

}  // namespace

OptimalOutcome accept_optimal(const std::vector<Submission>& submissions, const JashMeta& meta,
                              const Executor& exec, std::uint64_t reward) {
    std::vector<Submission> ranked = submissions;
    std::sort(ranked.begin(), ranked.end(), [](const Submission& a, const Submission& b) {
        return std::make_tuple(a.res.value(), a.arg.value(), a.logical_time, std::cref(a.miner_id)) <
               std::make_tuple(b.res.value(), b.arg.value(), b.logical_time, std::cref(b.miner_id));
    });
    Verifier verifier(meta, exec);
    OptimalOutcome out;
    for (const auto& s : ranked) {
        if (verifier.ok(s)) {
            out.winner = s;
            out.rewards = {{s.miner_id, reward}};
            return out;
        }
        out.disqualified.push_back(s);
    }
    throw Error(Errc::no_submissions,
                fmt::format("no verified submission among {} for '{}'", submissions.size(), meta.jash_id));
}

std::string result_set_json(const std::vector<ResultEntry>& entries) {
    std::vector<ResultEntry> sorted = entries;
    std::sort(sorted.begin(), sorted.end(),
              [](const ResultEntry& a, const ResultEntry& b) { return a.arg.value() < b.arg.value(); });
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : sorted) j.push_back({{"arg_hex", e.arg.hex()}, {"res_bits", e.res.str()}});
    return j.dump();
}

std::vector<ResultEntry> parse_result_set(std::string_view text, const JashMeta& meta) {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_array()) throw Error(Errc::decode, "result set is not a JSON array");
    std::vector<ResultEntry> out;
    out.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_object() || !item.contains("arg_hex") || !item.contains("res_bits") ||
            !item.at("arg_hex").is_string() || !item.at("res_bits").is_string()) {
            throw Error(Errc::decode, "result entry needs string arg_hex and res_bits");
        }
        const auto hex = item.at("arg_hex").get<std::string>();
        std::uint64_t value = 0;
        const auto [end, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
        if (ec != std::errc() || end != hex.data() + hex.size() || hex.empty()) {
            throw Error(Errc::decode, "bad arg_hex '" + hex + "'");
        }
        try {
            ResultEntry e{Bits(value, meta.n), Bits::parse(item.at("res_bits").get<std::string>())};
            if (e.arg.hex() != hex) throw Error(Errc::decode, "non-canonical arg_hex '" + hex + "'");
            out.push_back(e);
        } catch (const Error& e) {
            throw Error(Errc::decode, std::string("bad result entry: ") + e.what());
        }
    }
    return out;
}

FullOutcome accept_full(const std::vector<Submission>& submissions, const JashMeta& meta,
                        const Executor& exec, std::uint64_t reward) {
    Verifier verifier(meta, exec);
    FullOutcome out;
    std::map<std::uint64_t, Submission> first;
    for (const auto& s : submissions) {
        if (!verifier.ok(s)) {
            out.disqualified.push_back(s);
            continue;
        }
        auto [it, inserted] = first.emplace(s.arg.value(), s);
        if (!inserted && arrival_key(s) < arrival_key(it->second)) it->second = s;
    }

    constexpr std::size_t kMaxListedMissing = 1024;
    std::vector<std::uint64_t> missing;
    const std::uint64_t count = meta.arg_count();
    for (std::uint64_t v = 0; v < count && missing.size() < kMaxListedMissing; ++v) {
        if (!first.contains(v)) missing.push_back(v);
    }
    if (!missing.empty()) throw IncompleteCoverage(std::move(missing));

    std::vector<ResultEntry> entries;
    for (auto& [arg, s] : first) {
        entries.push_back({s.arg, s.res});
        out.credited.push_back(std::move(s));
    }
    const auto better_bonus = [](const Submission& a, const Submission& b) {
        const int za = leading_zeros(a.proof.bytes);
        const int zb = leading_zeros(b.proof.bytes);
        if (za != zb) return za > zb;
        if (a.proof != b.proof) return a.proof < b.proof;
        return arrival_key(a) < arrival_key(b);
    };
    out.bonus_winner = *std::min_element(out.credited.begin(), out.credited.end(), better_bonus);

    const std::uint64_t bonus = reward / 2;
    const std::uint64_t base = reward - bonus;
    const std::uint64_t share = base / out.credited.size();
    const std::uint64_t remainder = base - share * out.credited.size();
    std::vector<Reward> raw{{out.bonus_winner.miner_id, bonus + remainder}};
    for (const auto& s : out.credited) raw.push_back({s.miner_id, share});
    out.rewards = normalize_rewards(raw);

    out.result_set = result_set_json(entries);
    out.results_root = sha256(std::string_view(out.result_set));
    return out;
}

std::string classic_id(std::uint64_t height, std::uint64_t attempt) {
    return fmt::format("classic-{}-{}", height, attempt);
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_classic_id(std::string_view id) {
    constexpr std::string_view prefix = "classic-";
    if (!id.starts_with(prefix)) return std::nullopt;
    id.remove_prefix(prefix.size());
    std::uint64_t height = 0;
    std::uint64_t attempt = 0;
    const char* end = id.data() + id.size();
    auto [p, ec] = std::from_chars(id.data(), end, height);
    if (ec != std::errc() || p == end || *p != '-') return std::nullopt;
    auto [q, ec2] = std::from_chars(p + 1, end, attempt);
    if (ec2 != std::errc() || q != end) return std::nullopt;
    if (classic_id(height, attempt) != std::string(prefix) + std::string(id)) return std::nullopt;
    return std::make_pair(height, attempt);
}

Digest classic_header(const Digest& prev_hash, std::uint64_t height, std::uint64_t attempt) {
    Bytes input(prev_hash.bytes.begin(), prev_hash.bytes.end());
    append_be64(input, height);
    append_be64(input, attempt);
    return sha256(input);
}

Submission classic_submission(std::string miner_id, const jash::ClassicJash& job, const Bits& nonce,
                              std::uint64_t logical_time) {
    Submission s;
    s.miner_id = std::move(miner_id);
    s.arg = nonce;
    s.proof = job.digest(nonce);
    s.res = jash::digest_prefix(s.proof, job.meta().m);
    s.logical_time = logical_time;
    return s;
}

ClassicOutcome accept_classic(const std::vector<Submission>& submissions, const jash::ClassicJash& job,
                              int difficulty_t, std::uint64_t reward) {
    std::vector<Submission> ordered = submissions;
    std::sort(ordered.begin(), ordered.end(), [](const Submission& a, const Submission& b) {
        return std::make_tuple(a.logical_time, std::cref(a.miner_id), a.arg.value()) <
               std::make_tuple(b.logical_time, std::cref(b.miner_id), b.arg.value());
    });
    for (const auto& s : ordered) {
        if (s.arg.width() != job.meta().n) continue;
        const Digest digest = job.digest(s.arg);
        if (s.proof != digest || jash::digest_prefix(digest, job.meta().m) != s.res) continue;
        if (leading_zeros(digest.bytes) < difficulty_t) continue;
        return {s, {{s.miner_id, reward}}};
    }
    throw Error(Errc::no_qualifying_submission,
                fmt::format("no digest with {} leading zero bits among {} submissions", difficulty_t,
                            submissions.size()));
}

const char* check_name(Check check) noexcept {
    switch (check) {
        case Check::decode: return "decode";
        case Check::height: return "height";
        case Check::linkage: return "linkage";
        case Check::block_hash: return "block_hash";
        case Check::rewards: return "rewards";
        case Check::structure: return "structure";
        case Check::reexecution: return "reexecution";
    }
    return "unknown";
}

std::string VerifyReport::summary() const {
    if (ok()) return fmt::format("ok: {} blocks verified", blocks_checked);
    return fmt::format("invalid at height {}: {} check failed ({})", *invalid_height, check_name(*failed), detail);
}

namespace {

struct Failure {
    Check check;
    std::string detail;
};

std::optional<Failure> reexecute(const Block& b, const ArtifactStore& store, const ChainParams& params) {
    try {
        if (b.mode == BlockMode::classic) {
            const auto id = parse_classic_id(b.jash_id);
            if (!id || id->first != b.height) return Failure{Check::reexecution, "bad classic problem id"};
            const jash::ClassicJash job(classic_header(b.prev_hash, b.height, id->second),
                                        jash::ClassicJash::default_meta(b.jash_id));
            if (job.run(*b.winner_arg).res != *b.winner_res) {
                return Failure{Check::reexecution, "classic digest prefix mismatch"};
            }
            if (leading_zeros(job.digest(*b.winner_arg).bytes) < params.difficulty_t) {
                return Failure{Check::reexecution, "classic digest below difficulty"};
            }
            return std::nullopt;
        }
        const Job job = load_job(store, b.jash_id);
        if (block_mode_from(job.meta().mode) != b.mode) {
            return Failure{Check::reexecution, "block mode differs from the jash meta"};
        }
        if (b.mode == BlockMode::optimal) {
            if (job.run(*b.winner_arg).res != *b.winner_res) {
                return Failure{Check::reexecution, "winner_res differs from re-execution"};
            }
            return std::nullopt;
        }
        const auto entries = parse_result_set(store.get_text(*b.results_root), job.meta());
        if (entries.size() != job.meta().arg_count()) {
            return Failure{Check::reexecution, fmt::format("result set has {} entries, expected {}",
                                                           entries.size(), job.meta().arg_count())};
        }
        for (std::uint64_t v = 0; v < entries.size(); ++v) {
            if (entries[v].arg.value() != v) return Failure{Check::reexecution, "result set not one per arg in order"};
            if (job.run(entries[v].arg).res != entries[v].res) {
                return Failure{Check::reexecution, fmt::format("res of arg {} differs from re-execution", v)};
            }
        }
        return std::nullopt;
    } catch (const Error& e) {
        return Failure{Check::reexecution, e.what()};
    }
}

std::optional<Failure> check_block(const Block& b, const Digest& expected_prev, std::uint64_t expected_height,
                                   const ArtifactStore& store, const ChainParams& params) {
    if (b.height != expected_height) {
        return Failure{Check::height, fmt::format("height {} where {} expected", b.height, expected_height)};
    }
    if (b.prev_hash != expected_prev) return Failure{Check::linkage, "prev_hash does not match parent"};
    if (b.compute_hash() != b.block_hash) return Failure{Check::block_hash, "block_hash does not recompute"};
    if (b.reward_total() != params.reward) {
        return Failure{Check::rewards, fmt::format("rewards sum to {}, expected {}", b.reward_total(), params.reward)};
    }
    if (normalize_rewards(b.rewards) != b.rewards) {
        return Failure{Check::rewards, "rewards not one positive entry per miner in miner_id order"};
    }
    const bool winner = b.winner_arg && b.winner_res;
    const bool root = b.results_root.has_value();
    if (b.mode == BlockMode::full ? (root && !b.winner_arg && !b.winner_res) : (winner && !root)) {
        return reexecute(b, store, params);
    }
    return Failure{Check::structure, fmt::format("fields inconsistent with {} mode", block_mode_name(b.mode))};
}

}  // namespace

VerifyReport verify_chain(const Chain& chain, const ArtifactStore& store, const ChainParams& params) {
    VerifyReport report;
    Digest prev = Digest::zero();
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (auto failure = check_block(chain[i], prev, i + 1, store, params)) {
            report.invalid_height = i + 1;
            report.failed = failure->check;
            report.detail = std::move(failure->detail);
            return report;
        }
        prev = chain[i].block_hash;
        report.blocks_checked = i + 1;
    }
    return report;
}

VerifyReport verify_chain_bytes(ByteView bytes, const ArtifactStore& store, const ChainParams& params) {
    std::string error;
    const Chain chain = decode_prefix(bytes, error);
    VerifyReport report = verify_chain(chain, store, params);
    if (report.ok() && !error.empty()) {
        report.invalid_height = chain.size() + 1;
        report.failed = Check::decode;
        report.detail = error;
    }
    return report;
}

}  // namespace pnpchain::ledger
