// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pnpchain/bits.hpp"
#include "pnpchain/sha256.hpp"

namespace pnpchain {

enum class ExecMode { full, optimal };

const char* mode_name(ExecMode mode) noexcept;

/// Sidecar metadata of a jash: argument/result widths, loop cap, data binding and priority input.
struct JashMeta {
    std::string jash_id;
    int n = 1;                               // arg width in bits
    std::optional<std::uint64_t> max_arg;    // inclusive upper bound on arg, < 2^n
    int m = 1;                               // res width in bits
    std::uint64_t s = 1;                     // per-loop iteration cap
    ExecMode mode = ExecMode::full;
    double importance = 0.0;
    Bits dnf_sentinel = Bits::ones(1);
    std::optional<Digest> data_sha256;
    std::optional<std::uint64_t> data_record_size;

    /// Throws Error(malformed_meta) naming the first broken invariant.
    void check() const;

    /// Number of valid args: max_arg + 1, or 2^n.
    std::uint64_t arg_count() const noexcept;
    /// Validates width and range of an arg (ArgWidthMismatch / ArgAboveMax).
    void check_arg(const Bits& arg) const;
    Bits arg_bits(std::uint64_t value) const { return Bits(value, n); }

    nlohmann::json to_json() const;
    /// Strict: unknown keys, wrong types and invariant violations throw malformed_meta.
    /// A missing dnf_sentinel defaults to all ones.
    static JashMeta from_json(const nlohmann::json& j);
    static JashMeta parse(std::string_view text);
    /// Canonical JSON text (sorted keys, no whitespace).
    std::string canonical() const { return to_json().dump(); }

    bool operator==(const JashMeta&) const = default;
};

}  // namespace pnpchain
