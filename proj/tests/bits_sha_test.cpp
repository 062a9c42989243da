// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include <gtest/gtest.h>

#include "pnpchain/bits.hpp"
#include "pnpchain/error.hpp"
#include "pnpchain/sha256.hpp"

namespace pnpchain {
namespace {

TEST(Sha256, FipsVectors) {
    EXPECT_EQ(sha256(std::string_view("")).hex(),
              "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256(std::string_view("abc")).hex(),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Sha256, IncrementalMatchesOneShot) {
    Sha256 h;
    h.update(std::string_view("a")).update(std::string_view("bc"));
    EXPECT_EQ(h.finish(), sha256(std::string_view("abc")));
}

TEST(Bits, RenderingAndEncoding) {
    const Bits b(23, 6);
    EXPECT_EQ(b.str(), "010111");
    EXPECT_EQ(b.hex(), "17");
    EXPECT_EQ(Bits::parse("010111"), b);
    EXPECT_EQ(Bits(0x616263, 24).bytes(), (Bytes{'a', 'b', 'c'}));
    EXPECT_EQ(Bits(1, 9).bytes(), (Bytes{0x00, 0x01}));
    EXPECT_EQ(Bits::ones(3).str(), "111");
}

TEST(Bits, RejectsBadInput) {
    EXPECT_THROW(Bits(8, 3), Error);
    EXPECT_THROW(Bits(0, 0), Error);
    EXPECT_THROW(Bits(0, 64), Error);
    EXPECT_THROW(Bits::parse("01a"), Error);
    EXPECT_THROW(Bits::parse(""), Error);
}

TEST(LeadingZeros, Examples) {
    EXPECT_EQ(leading_zeros(std::string_view("0001")), 3);
    EXPECT_EQ(leading_zeros(std::string_view("1000")), 0);
    EXPECT_EQ(leading_zeros(std::string_view("0000")), 4);
    // First byte of SHA-256("") is 0xe3.
    EXPECT_EQ(leading_zeros(sha256(std::string_view("")).bytes), 0);
    EXPECT_EQ(leading_zeros(Bytes{0x00, 0x01}), 15);
    EXPECT_EQ(leading_zeros(Bytes{0x00, 0x00}), 16);
}

TEST(LeadingZeros, EmptyInputThrows) {
    try {
        leading_zeros(std::string_view(""));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::empty_input);
    }
    EXPECT_THROW(leading_zeros(ByteView{}), Error);
}

TEST(Hex, RoundTripAndErrors) {
    const Bytes raw{0x00, 0xab, 0xff};
    EXPECT_EQ(to_hex(raw), "00abff");
    EXPECT_EQ(from_hex("00ABff"), raw);
    EXPECT_THROW(from_hex("abc"), Error);
    EXPECT_THROW(from_hex("zz"), Error);
}

}  // namespace
}  // namespace pnpchain
