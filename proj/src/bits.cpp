// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/bits.hpp"

#include "pnpchain/error.hpp"

namespace pnpchain {

std::uint64_t mask_to(std::uint64_t value, int width) noexcept {
    if (width >= 64) return value;
    return value & ((std::uint64_t{1} << width) - 1);
}

Bits::Bits(std::uint64_t value, int width) : value_(value), width_(width) {
    if (width < 1 || width > kMaxBitWidth) {
        throw Error(Errc::arg_width_mismatch, "bit width must be in [1,63], got " +
                                                  std::to_string(width));
    }
    if (mask_to(value, width) != value) {
        throw Error(Errc::arg_width_mismatch,
                    "value " + std::to_string(value) + " does not fit in " +
                        std::to_string(width) + " bits");
    }
}

Bits Bits::parse(std::string_view text) {
    if (text.empty() || text.size() > kMaxBitWidth) {
        throw Error(Errc::arg_width_mismatch, "bit string length must be in [1,63]");
    }
    std::uint64_t value = 0;
    for (const char c : text) {
        if (c != '0' && c != '1') {
            throw Error(Errc::arg_width_mismatch, "bit string may only contain '0' and '1'");
        }
        value = (value << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return Bits(value, static_cast<int>(text.size()));
}

Bits Bits::ones(int width) { return Bits(mask_to(~std::uint64_t{0}, width), width); }

std::string Bits::str() const {
    std::string out(static_cast<std::size_t>(width_), '0');
    for (int i = 0; i < width_; ++i) {
        if ((value_ >> (width_ - 1 - i)) & 1U) out[static_cast<std::size_t>(i)] = '1';
    }
    return out;
}

std::string Bits::hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    const int nibbles = (width_ + 3) / 4;
    std::string out(static_cast<std::size_t>(nibbles), '0');
    for (int i = 0; i < nibbles; ++i) {
        out[static_cast<std::size_t>(nibbles - 1 - i)] = digits[(value_ >> (4 * i)) & 0xF];
    }
    return out;
}

Bytes Bits::bytes() const {
    const int count = (width_ + 7) / 8;
    Bytes out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(count - 1 - i)] =
            static_cast<std::uint8_t>((value_ >> (8 * i)) & 0xFF);
    }
    return out;
}

int leading_zeros(ByteView bytes) {
    if (bytes.empty()) throw Error(Errc::empty_input, "leading_zeros of empty input");
    int count = 0;
    for (const std::uint8_t byte : bytes) {
        if (byte == 0) {
            count += 8;
            continue;
        }
        for (int bit = 7; bit >= 0 && ((byte >> bit) & 1U) == 0; --bit) ++count;
        break;
    }
    return count;
}

int leading_zeros(std::string_view bits) {
    if (bits.empty()) throw Error(Errc::empty_input, "leading_zeros of empty input");
    int count = 0;
    for (const char c : bits) {
        if (c != '0') break;
        ++count;
    }
    return count;
}

std::string to_hex(ByteView bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (const std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw Error(Errc::decode, "odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error(Errc::decode, "invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

void append_be64(Bytes& out, std::uint64_t value) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

void append_be32(Bytes& out, std::uint32_t value) {
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

}  // namespace pnpchain
