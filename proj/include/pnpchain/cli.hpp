// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <ostream>

namespace pnpchain::cli {

// Exit codes are a stable contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;  // domain rejection or invalid chain
inline constexpr int kExitUsage = 2;
inline constexpr int kExitStall = 3;

/// Entry point of the `pnpchain` tool: submit, run, verify, results, show.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pnpchain::cli
