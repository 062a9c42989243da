// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "pnpchain/artifact_store.hpp"
#include "pnpchain/bits.hpp"
#include "pnpchain/jash/classic.hpp"
#include "pnpchain/jash/meta.hpp"

namespace pnpchain::workloads {

/// A ready-to-submit jash: source text, meta and an optional data bundle.
/// When a bundle is present, meta.data_sha256 already names it.
struct Workload {
    std::string source;
    JashMeta meta;
    std::optional<DataBundle> data;
};

// Docking: pair (n_p, n_r) maps to b = n_r mod N_r + n_p * N_r in n bits.

struct DockingSpace {
    std::uint64_t N_p = 1;
    std::uint64_t N_r = 1;
    int n = 1;  // ceil(log2(N_p * N_r)), at least 1

    static DockingSpace of(std::uint64_t N_p, std::uint64_t N_r);
    std::uint64_t pairs() const noexcept { return N_p * N_r; }
};

inline const Bits kBinds = Bits::parse("01");
inline const Bits kDoesNotBind = Bits::parse("00");
inline const Bits kOutOfSpace = Bits::parse("10");

/// Throws IndexOutOfRange.
Bits dock_encode(std::uint64_t n_p, std::uint64_t n_r, const DockingSpace& space);
/// Throws ValueOutOfSpace; args past the pair space are reported as "10" by the jash.
std::pair<std::uint64_t, std::uint64_t> dock_decode(const Bits& b, const DockingSpace& space);

inline constexpr std::uint64_t kDockingRecordSize = 8;

/// One 8-byte record per pair: the first 8 bytes of SHA-256(seed || be64(pair)).
DataBundle make_docking_bundle(const DockingSpace& space, std::uint64_t seed);

/// Full-mode jash over every n-bit arg. The stand-in predicate is the parity of
/// the pair's 64-bit record: odd binds ("01"), even does not ("00").
Workload make_docking_jash(const DockingSpace& space, std::uint64_t seed, std::uint64_t s = 100,
                           std::string jash_id = "docking");

/// Collatz from argval, capped at s iterations per loop: "001" once b reaches 1,
/// the sentinel "111" if the cap runs out first.
Workload make_collatz_jash(std::uint64_t s, int n = 8, std::string jash_id = "collatz");

jash::ClassicJash make_classic_jash(const Digest& header_digest, int n = jash::kClassicArgBits,
                                    int m = jash::kClassicResBits, std::string jash_id = "classic");

/// Builds a workload from a manifest such as
///   {"generator": "collatz", "s": 30, "n": 8}
///   {"generator": "docking", "N_p": 5, "N_r": 10, "seed": 7, "s": 100}
/// Optional keys "jash_id", "importance" and "mode" override the generated meta.
Workload from_manifest(const nlohmann::json& manifest);

}  // namespace pnpchain::workloads
