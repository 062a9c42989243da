// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "pnpchain/bits.hpp"

namespace pnpchain {

/// 32-byte SHA-256 digest. Compares bytewise, which equals numeric big-endian order.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    std::string hex() const { return to_hex(bytes); }
    static Digest from_hex(std::string_view hex);
    static Digest zero() { return {}; }

    friend auto operator<=>(const Digest&, const Digest&) = default;
};

Digest sha256(ByteView data);
Digest sha256(std::string_view text);

/// Incremental hashing over several byte ranges.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(ByteView data);
    Sha256& update(std::string_view text);
    /// Returns the digest and resets the context for the next message.
    Digest finish();

private:
    void* ctx_;
};

}  // namespace pnpchain
