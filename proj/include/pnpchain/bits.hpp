// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pnpchain {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr int kMaxBitWidth = 63;

/// A fixed-width bit string of 1..63 bits, stored as its numeric value.
/// Ordering is numeric (widths are expected to match when compared).
class Bits {
public:
    Bits() = default;
    Bits(std::uint64_t value, int width);

    static Bits parse(std::string_view text);       // "0101"
    static Bits zeros(int width) { return Bits(0, width); }
    static Bits ones(int width);

    std::uint64_t value() const noexcept { return value_; }
    int width() const noexcept { return width_; }

    /// MSB-first character rendering, exactly width() characters.
    std::string str() const;
    /// Lowercase hex, ceil(width/4) digits.
    std::string hex() const;
    /// Big-endian, ceil(width/8) bytes.
    Bytes bytes() const;

    friend bool operator==(const Bits&, const Bits&) = default;
    friend std::strong_ordering operator<=>(const Bits& a, const Bits& b) {
        if (auto c = a.value_ <=> b.value_; c != 0) return c;
        return a.width_ <=> b.width_;
    }

private:
    std::uint64_t value_ = 0;
    int width_ = 1;
};

/// Low `width` bits of `value`.
std::uint64_t mask_to(std::uint64_t value, int width) noexcept;

/// Leading zero bits of a non-empty byte string read MSB-first. Throws EmptyInput.
int leading_zeros(ByteView bytes);
/// Leading zero characters of a non-empty '0'/'1' string. Throws EmptyInput.
int leading_zeros(std::string_view bits);

std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

void append_be64(Bytes& out, std::uint64_t value);
void append_be32(Bytes& out, std::uint32_t value);

}  // namespace pnpchain
