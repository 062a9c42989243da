// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/jash/classic.hpp"

namespace pnpchain::jash {

ClassicJash::ClassicJash(Digest header, JashMeta meta) : header_(header), meta_(std::move(meta)) {
    meta_.check();
}

JashMeta ClassicJash::default_meta(std::string jash_id) {
    JashMeta meta;
    meta.jash_id = std::move(jash_id);
    meta.n = kClassicArgBits;
    meta.m = kClassicResBits;
    meta.s = 1;
    meta.mode = ExecMode::optimal;
    meta.importance = 0.0;
    meta.dnf_sentinel = Bits::ones(kClassicResBits);
    return meta;
}

Digest ClassicJash::digest(const Bits& nonce) const {
    return Sha256().update(header_.bytes).update(nonce.bytes()).finish();
}

ExecResult ClassicJash::run(const Bits& nonce) const {
    meta_.check_arg(nonce);
    return ExecResult{digest_prefix(digest(nonce), meta_.m), 1, HaltReason::output_stmt};
}

Bits digest_prefix(const Digest& digest, int m) {
    std::uint64_t top = 0;
    for (int i = 0; i < 8; ++i) top = (top << 8) | digest.bytes[static_cast<std::size_t>(i)];
    return Bits(top >> (64 - m), m);
}

}  // namespace pnpchain::jash
