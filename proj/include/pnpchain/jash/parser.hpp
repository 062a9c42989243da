// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <string>
#include <string_view>

#include "pnpchain/jash/ast.hpp"

namespace pnpchain::jash {

/// Parses jash-mini source. Throws SyntaxError (with line/column) or UnknownIdentifier
/// when a name is neither a builtin nor assigned earlier in the text.
JashProgram parse(std::string_view source);

/// Canonical source text; parse(print(p)) == p.
std::string print(const Block& statements);
std::string print(const Expr& expr);

/// Wraps already-built statements, filling in the canonical source text.
JashProgram make_program(Block statements);

}  // namespace pnpchain::jash
