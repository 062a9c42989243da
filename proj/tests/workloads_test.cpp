// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include <bit>
#include <set>

#include <gtest/gtest.h>

#include "pnpchain/error.hpp"
#include "pnpchain/jash/interpreter.hpp"
#include "pnpchain/jash/parser.hpp"
#include "pnpchain/workloads.hpp"

namespace pnpchain {
namespace {

using namespace workloads;

jash::ExecResult run(const Workload& w, std::uint64_t arg) {
    const jash::BoundedJash job(jash::parse(w.source), w.meta);
    if (w.data) {
        const jash::BundleWindows windows(w.data->bytes, w.meta.data_record_size);
        return job.run(arg, windows);
    }
    return job.run(arg, jash::NoData{});
}

TEST(Docking, SpaceWidth) {
    EXPECT_EQ(DockingSpace::of(5, 10).n, 6);
    EXPECT_EQ(DockingSpace::of(1, 1).n, 1);
    EXPECT_EQ(DockingSpace::of(2, 2).n, 2);
    EXPECT_EQ(DockingSpace::of(3, 3).n, 4);
    EXPECT_EQ(DockingSpace::of(256, 256).n, 16);
    EXPECT_THROW(DockingSpace::of(0, 3), Error);
}

TEST(Docking, EncodeExamples) {
    const auto space = DockingSpace::of(5, 10);
    EXPECT_EQ(dock_encode(2, 3, space).str(), "010111");
    EXPECT_EQ(dock_encode(0, 0, space).str(), "000000");
    EXPECT_EQ(dock_encode(4, 9, space).str(), "110001");
    EXPECT_EQ(dock_decode(Bits::parse("010111"), space), std::make_pair(std::uint64_t{2}, std::uint64_t{3}));
    EXPECT_EQ(dock_decode(Bits::parse("000000"), space), std::make_pair(std::uint64_t{0}, std::uint64_t{0}));
    try {
        dock_decode(Bits(50, 6), space);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::value_out_of_space);
    }
    try {
        dock_encode(5, 0, space);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::index_out_of_range);
    }
}

TEST(Docking, EncodingIsBijective) {
    for (std::uint64_t np = 1; np <= 12; ++np) {
        for (std::uint64_t nr = 1; nr <= 12; ++nr) {
            const auto space = DockingSpace::of(np, nr);
            std::set<std::uint64_t> seen;
            for (std::uint64_t p = 0; p < np; ++p) {
                for (std::uint64_t r = 0; r < nr; ++r) {
                    const Bits b = dock_encode(p, r, space);
                    EXPECT_EQ(b.width(), space.n);
                    EXPECT_TRUE(seen.insert(b.value()).second);
                    EXPECT_EQ(dock_decode(b, space), std::make_pair(p, r));
                }
            }
            EXPECT_EQ(seen.size(), np * nr);
            EXPECT_EQ(*seen.rbegin(), np * nr - 1);
        }
    }
}

TEST(Docking, JashMatchesParityOracle) {
    const auto space = DockingSpace::of(5, 10);
    const Workload w = make_docking_jash(space, 7);
    ASSERT_TRUE(w.data);
    EXPECT_EQ(w.data->d, 50 * kDockingRecordSize);
    EXPECT_EQ(w.meta.data_sha256, w.data->sha256);
    for (std::uint64_t arg = 0; arg < (1U << space.n); ++arg) {
        const auto got = run(w, arg).res.str();
        if (arg >= space.pairs()) {
            EXPECT_EQ(got, "10");
            continue;
        }
        std::uint64_t record = 0;
        for (std::uint64_t k = 0; k < 8; ++k) record = record << 8 | w.data->bytes[arg * 8 + k];
        EXPECT_EQ(got, std::popcount(record) % 2 == 1 ? "01" : "00") << arg;
    }
}

TEST(Docking, SmallCapHitsSentinel) {
    const auto space = DockingSpace::of(2, 2);
    EXPECT_EQ(run(make_docking_jash(space, 1, 65), 0).res.str(), "11");
    EXPECT_EQ(run(make_docking_jash(space, 1, 65), 0).halted_by, jash::HaltReason::sentinel);
    EXPECT_NE(run(make_docking_jash(space, 1, 66), 0).res.str(), "11");
}

TEST(Collatz, Outcomes) {
    EXPECT_EQ(run(make_collatz_jash(30), 37).res.str(), "001");
    EXPECT_EQ(run(make_collatz_jash(10), 37).res.str(), "111");
    EXPECT_EQ(run(make_collatz_jash(10), 37).halted_by, jash::HaltReason::sentinel);
    for (std::uint64_t s : {1U, 2U, 5U, 100U}) {
        const auto r = run(make_collatz_jash(s), 1);
        // s = 1 leaves no iteration before the cap fires.
        EXPECT_EQ(r.res.str(), s == 1 ? "111" : "001") << s;
    }
    EXPECT_THROW(make_collatz_jash(0), Error);
}

TEST(Classic, BuiltinIsDeterministic) {
    const auto job = make_classic_jash(Digest::zero());
    const Bits nonce(12345, jash::kClassicArgBits);
    EXPECT_EQ(job.run(nonce), job.run(nonce));
    EXPECT_EQ(job.run(nonce).res, jash::digest_prefix(job.digest(nonce), jash::kClassicResBits));
}

TEST(Manifest, BuildsGenerators) {
    const auto c = from_manifest({{"generator", "collatz"}, {"s", 30}, {"n", 6}, {"jash_id", "c6"}});
    EXPECT_EQ(c.meta.jash_id, "c6");
    EXPECT_EQ(c.meta.n, 6);
    EXPECT_EQ(c.meta.s, 30U);
    const auto d = from_manifest(
        {{"generator", "docking"}, {"N_p", 5}, {"N_r", 10}, {"seed", 7}, {"mode", "optimal"}});
    EXPECT_EQ(d.meta.n, 6);
    EXPECT_EQ(d.meta.mode, ExecMode::optimal);
    EXPECT_TRUE(d.data);
    EXPECT_THROW(from_manifest({{"generator", "gan"}}), Error);
    EXPECT_THROW(from_manifest({{"generator", "collatz"}}), Error);
}

}  // namespace
}  // namespace pnpchain
