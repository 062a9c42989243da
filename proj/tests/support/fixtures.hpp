// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <string>

#include "pnpchain/jash/meta.hpp"

namespace pnpchain::testing {

// The unbounded Collatz loop, as a researcher would first write it.
inline constexpr const char* kCollatzWhile = R"(b = 37
while (b != 1) {
  if (b % 2 == 0) {
    b = b / 2
  } else {
    b = 3 * b + 1
  }
}
)";

// The same loop rewritten by hand with a fixed bound and an early break.
inline constexpr const char* kCollatzBounded = R"(b = argval
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
)";

inline JashMeta make_meta(std::string id, int n, int m, std::uint64_t s,
                          ExecMode mode = ExecMode::full) {
    JashMeta meta;
    meta.jash_id = std::move(id);
    meta.n = n;
    meta.m = m;
    meta.s = s;
    meta.mode = mode;
    meta.importance = 0.5;
    meta.dnf_sentinel = Bits::ones(m);
    return meta;
}

}  // namespace pnpchain::testing
