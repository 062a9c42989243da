// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/jash/analysis.hpp"

#include <algorithm>
#include <limits>

#include "pnpchain/jash/parser.hpp"

namespace pnpchain::jash {

const char* violation_name(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::while_forbidden: return "WhileForbidden";
        case ViolationKind::bound_exceeds_s: return "BoundExceedsS";
        case ViolationKind::loop_start_below_one: return "LoopStartBelowOne";
        case ViolationKind::nesting_too_deep: return "NestingTooDeep";
        case ViolationKind::program_too_large: return "ProgramTooLarge";
    }
    return "Unknown";
}

bool ValidationReport::has(ViolationKind kind) const noexcept {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
    if (ok()) return "ok";
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += violation_name(v.kind);
        if (!v.detail.empty()) out += " (" + v.detail + ")";
    }
    return out;
}

std::size_t statement_count(const Block& block) {
    std::size_t count = 0;
    for (const auto& s : block) {
        count += 1 + statement_count(s.body) + statement_count(s.else_body);
    }
    return count;
}

namespace {

struct Validator {
    const JashMeta& meta;
    ValidationReport report;
    bool nesting_reported = false;
    bool saw_output = false;

    void add(ViolationKind kind, std::string detail) {
        report.violations.push_back({kind, std::move(detail)});
    }

    void block(const Block& stmts, int depth) {
        for (const auto& s : stmts) stmt(s, depth);
    }

    void stmt(const Stmt& s, int depth) {
        switch (s.kind) {
            case StmtKind::assign:
            case StmtKind::break_loop:
                return;
            case StmtKind::output:
                saw_output = true;
                return;
            case StmtKind::if_else:
                block(s.body, depth);
                block(s.else_body, depth);
                return;
            case StmtKind::while_loop:
                add(ViolationKind::while_forbidden, "while (" + print(s.expr) + ")");
                loop_depth(depth + 1);
                block(s.body, depth + 1);
                return;
            case StmtKind::for_loop:
                if (s.start < 1) {
                    add(ViolationKind::loop_start_below_one,
                        "loop '" + s.var + "' starts at " + std::to_string(s.start));
                }
                if (s.bound.kind == BoundKind::literal && s.bound.value > meta.s) {
                    add(ViolationKind::bound_exceeds_s, "loop '" + s.var + "' bound " +
                                                            std::to_string(s.bound.value) +
                                                            " > s=" + std::to_string(meta.s));
                }
                loop_depth(depth + 1);
                block(s.body, depth + 1);
                return;
        }
    }

    void loop_depth(int depth) {
        if (depth > kMaxLoopNesting && !nesting_reported) {
            nesting_reported = true;
            add(ViolationKind::nesting_too_deep,
                "depth " + std::to_string(depth) + " > " + std::to_string(kMaxLoopNesting));
        }
    }
};

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a > kSaturated / b ? kSaturated : a * b;
}

struct Bounder {
    const JashMeta& meta;

    std::uint64_t trips(const LoopBound& bound) const {
        switch (bound.kind) {
            case BoundKind::literal: return bound.value;
            case BoundKind::s: return meta.s;
            case BoundKind::n: return kWorstCaseN;
        }
        return kSaturated;
    }

    std::uint64_t block(const Block& stmts) const {
        std::uint64_t total = 0;
        for (const auto& s : stmts) total = sat_add(total, stmt(s));
        return total;
    }

    std::uint64_t stmt(const Stmt& s) const {
        switch (s.kind) {
            case StmtKind::assign:
            case StmtKind::break_loop:
            case StmtKind::output:
                return 1;
            case StmtKind::if_else:
                return sat_add(1, std::max(block(s.body), block(s.else_body)));
            case StmtKind::for_loop:
                return sat_add(1, sat_mul(trips(s.bound), sat_add(1, block(s.body))));
            case StmtKind::while_loop:
                return kSaturated;
        }
        return kSaturated;
    }

    static int degree(const Block& stmts) {
        int best = 0;
        for (const auto& s : stmts) {
            int d = std::max(degree(s.body), degree(s.else_body));
            if (s.kind == StmtKind::for_loop && s.bound.kind == BoundKind::n) ++d;
            best = std::max(best, d);
        }
        return best;
    }
};

}  // namespace

ValidationReport validate(const JashProgram& prog, const JashMeta& meta) {
    Validator v{meta, {}};
    const std::size_t count = statement_count(prog.statements);
    if (count > kMaxStatements) {
        v.add(ViolationKind::program_too_large,
              std::to_string(count) + " statements > " + std::to_string(kMaxStatements));
    }
    v.block(prog.statements, 0);
    if (!v.saw_output) v.report.warnings.emplace_back("NoReachableOutput");
    return std::move(v.report);
}

ComplexityBound complexity_bound(const JashProgram& prog, const JashMeta& meta) {
    const Bounder b{meta};
    ComplexityBound out;
    out.worst_case_steps = std::max<std::uint64_t>(1, b.block(prog.statements));
    out.degree_c = Bounder::degree(prog.statements);
    return out;
}

}  // namespace pnpchain::jash
