// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/workloads.hpp"

#include <bit>

#include <fmt/format.h>

#include "pnpchain/error.hpp"
#include "pnpchain/sha256.hpp"

namespace pnpchain::workloads {

DockingSpace DockingSpace::of(std::uint64_t N_p, std::uint64_t N_r) {
    if (N_p == 0 || N_r == 0) throw Error(Errc::index_out_of_range, "docking space needs N_p, N_r >= 1");
    if (N_r > (std::uint64_t{1} << kMaxBitWidth) / N_p) {
        throw Error(Errc::value_out_of_space, "docking space exceeds 2^63 pairs");
    }
    DockingSpace space;
    space.N_p = N_p;
    space.N_r = N_r;
    const std::uint64_t pairs = N_p * N_r;
    space.n = std::max(1, static_cast<int>(std::bit_width(pairs - 1)));
    return space;
}

Bits dock_encode(std::uint64_t n_p, std::uint64_t n_r, const DockingSpace& space) {
    if (n_p >= space.N_p || n_r >= space.N_r) {
        throw Error(Errc::index_out_of_range,
                    fmt::format("pair ({}, {}) outside {}x{} space", n_p, n_r, space.N_p, space.N_r));
    }
    return Bits(n_r % space.N_r + n_p * space.N_r, space.n);
}

std::pair<std::uint64_t, std::uint64_t> dock_decode(const Bits& b, const DockingSpace& space) {
    if (b.value() >= space.pairs()) {
        throw Error(Errc::value_out_of_space,
                    fmt::format("value {} outside a space of {} pairs", b.value(), space.pairs()));
    }
    return {b.value() / space.N_r, b.value() % space.N_r};
}

DataBundle make_docking_bundle(const DockingSpace& space, std::uint64_t seed) {
    Bytes bytes;
    bytes.reserve(space.pairs() * kDockingRecordSize);
    for (std::uint64_t pair = 0; pair < space.pairs(); ++pair) {
        Bytes input;
        append_be64(input, seed);
        append_be64(input, pair);
        const Digest d = sha256(input);
        bytes.insert(bytes.end(), d.bytes.begin(), d.bytes.begin() + kDockingRecordSize);
    }
    return DataBundle::of(std::move(bytes));
}

Workload make_docking_jash(const DockingSpace& space, std::uint64_t seed, std::uint64_t s,
                           std::string jash_id) {
    // Parity needs 64 loop trips plus the exiting one; smaller caps hit the sentinel.
    Workload w;
    w.source = fmt::format(R"(// docking stand-in: parity of the pair's record
if (argval >= {}) {{
  output 0b10 exit
}}
x = data(0, 8)
p = 0
for (i = 1; i <= s; i++) {{
  if (i == s) {{
    output 0b11 exit
  }}
  if (i > 64) {{
    break
  }}
  p = p ^ ((x >> (i - 1)) & 1)
}}
if (p == 1) {{
  output 0b01 exit
}}
output 0b00
)",
                           space.pairs());
    DataBundle bundle = make_docking_bundle(space, seed);
    w.meta.jash_id = std::move(jash_id);
    w.meta.n = space.n;
    w.meta.m = 2;
    w.meta.s = s;
    w.meta.mode = ExecMode::full;
    w.meta.importance = 0.8;
    w.meta.dnf_sentinel = Bits::parse("11");
    w.meta.data_sha256 = bundle.sha256;
    w.meta.data_record_size = kDockingRecordSize;
    w.data = std::move(bundle);
    w.meta.check();
    return w;
}

Workload make_collatz_jash(std::uint64_t s, int n, std::string jash_id) {
    if (s == 0) throw Error(Errc::malformed_meta, "collatz needs s >= 1");
    Workload w;
    w.source = R"(b = argval
for (i = 1; i <= s; i++) {
  if (i == s) {
    output 0b111 exit
  }
  if (b == 1) {
    break
  } else if (b % 2 == 0) {
    b = b / 2
  } else {
    b = 3 * b + 1
  }
}
output 0b001
)";
    w.meta.jash_id = std::move(jash_id);
    w.meta.n = n;
    w.meta.m = 3;
    w.meta.s = s;
    w.meta.mode = ExecMode::full;
    w.meta.importance = 0.5;
    w.meta.dnf_sentinel = Bits::parse("111");
    w.meta.check();
    return w;
}

jash::ClassicJash make_classic_jash(const Digest& header_digest, int n, int m, std::string jash_id) {
    JashMeta meta = jash::ClassicJash::default_meta(std::move(jash_id));
    meta.n = n;
    meta.m = m;
    meta.dnf_sentinel = Bits::ones(m);
    meta.check();
    return jash::ClassicJash(header_digest, std::move(meta));
}

namespace {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

Workload from_manifest(const nlohmann::json& manifest) {
    try {
        const std::string generator = manifest.at("generator").get<std::string>();
        Workload w;
        if (generator == "collatz") {
            w = make_collatz_jash(manifest.at("s").get<std::uint64_t>(), get_or(manifest, "n", 8),
                                  get_or<std::string>(manifest, "jash_id", "collatz"));
        } else if (generator == "docking") {
            const auto space = DockingSpace::of(manifest.at("N_p").get<std::uint64_t>(),
                                                manifest.at("N_r").get<std::uint64_t>());
            w = make_docking_jash(space, get_or<std::uint64_t>(manifest, "seed", 0),
                                  get_or<std::uint64_t>(manifest, "s", 100),
                                  get_or<std::string>(manifest, "jash_id", "docking"));
        } else {
            throw Error(Errc::malformed_meta, "unknown workload generator '" + generator + "'");
        }
        if (manifest.contains("importance")) w.meta.importance = manifest.at("importance").get<double>();
        if (manifest.contains("mode")) {
            const auto mode = manifest.at("mode").get<std::string>();
            if (mode != "full" && mode != "optimal") throw Error(Errc::malformed_meta, "unknown mode " + mode);
            w.meta.mode = mode == "full" ? ExecMode::full : ExecMode::optimal;
        }
        w.meta.check();
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::malformed_meta, std::string("bad workload manifest: ") + e.what());
    }
}

}  // namespace pnpchain::workloads
