// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pnpchain/jash/ast.hpp"
#include "pnpchain/jash/meta.hpp"

namespace pnpchain::jash {

inline constexpr int kMaxLoopNesting = 8;
inline constexpr std::size_t kMaxStatements = 4096;
/// Value substituted for `n` when bounding n-bounded loops.
inline constexpr std::uint64_t kWorstCaseN = 63;

enum class ViolationKind {
    while_forbidden,
    bound_exceeds_s,
    loop_start_below_one,
    nesting_too_deep,
    program_too_large,
};

const char* violation_name(ViolationKind kind) noexcept;

struct Violation {
    ViolationKind kind;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<std::string> warnings;  // e.g. NoReachableOutput

    bool ok() const noexcept { return violations.empty(); }
    bool has(ViolationKind kind) const noexcept;
    std::string summary() const;
};

/// Checks the bounded-complexity rules. Never throws on a parsed program.
ValidationReport validate(const JashProgram& prog, const JashMeta& meta);

struct ComplexityBound {
    std::uint64_t worst_case_steps = 1;  // saturates at 2^64-1
    int degree_c = 0;                    // max nesting of n-bounded loops

    bool operator==(const ComplexityBound&) const = default;
};

/// Static step bound under the accounting "1 per statement, 1 per for-header iteration".
/// Expects a validated program; a while loop yields a saturated bound.
ComplexityBound complexity_bound(const JashProgram& prog, const JashMeta& meta);

/// Total number of statement nodes, nested ones included.
std::size_t statement_count(const Block& block);

}  // namespace pnpchain::jash
