// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include "pnpchain/jash/ast.hpp"
#include "pnpchain/jash/meta.hpp"

namespace pnpchain::jash {

/// Rewrites every `while (c) { body }` into
///
///     for (v = 1; v <= s; v++) {
///       if (v == s) { output <dnf_sentinel> exit }
///       if (!(c)) { break }
///       body
///     }
///
/// with a fresh `v` per loop. Other statements are kept as they are, so a
/// program without while loops comes back unchanged.
JashProgram transform_bounded(const JashProgram& prog, const JashMeta& meta);

}  // namespace pnpchain::jash
