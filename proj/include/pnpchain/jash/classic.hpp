// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include "pnpchain/bits.hpp"
#include "pnpchain/jash/interpreter.hpp"
#include "pnpchain/jash/meta.hpp"
#include "pnpchain/sha256.hpp"

namespace pnpchain::jash {

inline constexpr int kClassicArgBits = 20;
inline constexpr int kClassicResBits = 63;

/// Builtin SHA-256 jash: res(nonce) = first m bits of SHA-256(header || nonce bytes).
/// Honors the execute() contract without going through the AST interpreter.
class ClassicJash {
public:
    ClassicJash(Digest header, JashMeta meta);

    /// Meta for a classic problem: n=20, m=63, optimal mode, no data.
    static JashMeta default_meta(std::string jash_id);

    const Digest& header() const noexcept { return header_; }
    const JashMeta& meta() const noexcept { return meta_; }
    ComplexityBound bound() const noexcept { return {1, 0}; }

    Digest digest(const Bits& nonce) const;
    ExecResult run(const Bits& nonce) const;

private:
    Digest header_;
    JashMeta meta_;
};

/// First `m` bits of a digest, MSB-first.
Bits digest_prefix(const Digest& digest, int m);

}  // namespace pnpchain::jash
