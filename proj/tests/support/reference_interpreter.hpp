// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

// Unbounded reference interpreter for jash-mini, written separately from the
// library interpreter. It runs while loops directly and records, for every
// while instance, how many times its condition was evaluated.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "pnpchain/jash/ast.hpp"

namespace pnpchain::testing {

struct RefEnv {
    std::uint64_t arg = 0;
    int n = 1;
    std::uint64_t s = 1;
    std::span<const std::uint8_t> window;
};

struct RefOutcome {
    bool terminated = true;                 // false when the step cap was hit
    std::optional<std::uint64_t> output;    // unmasked value of the first output
    std::uint64_t max_condition_checks = 0; // over all while instances
    std::uint64_t steps = 0;
};

class ReferenceInterpreter {
public:
    /// Stops early once any while instance reaches `stop_at_checks` evaluations,
    /// or after `step_cap` steps (reported as non-terminating).
    explicit ReferenceInterpreter(RefEnv env, std::uint64_t stop_at_checks = UINT64_MAX,
                                  std::uint64_t step_cap = 2'000'000)
        : env_(env), stop_checks_(stop_at_checks), cap_(step_cap) {}

    RefOutcome run(const jash::Block& program) {
        out_ = {};
        vars_.clear();
        try {
            exec(program, 0);
        } catch (const Stop&) {
        }
        return out_;
    }

private:
    struct Stop {};
    enum class Ctl { go, brk, halt };

    void tick() {
        if (++out_.steps > cap_) {
            out_.terminated = false;
            throw Stop{};
        }
    }

    Ctl exec(const jash::Block& b, int loops) {
        for (const auto& st : b) {
            const Ctl c = exec(st, loops);
            if (c != Ctl::go) return c;
        }
        return Ctl::go;
    }

    Ctl exec(const jash::Stmt& st, int loops) {
        using jash::StmtKind;
        tick();
        switch (st.kind) {
            case StmtKind::assign:
                vars_[st.var] = value(st.expr);
                return Ctl::go;
            case StmtKind::output:
                out_.output = value(st.expr);
                throw Stop{};
            case StmtKind::break_loop:
                if (loops == 0) throw Stop{};
                return Ctl::brk;
            case StmtKind::if_else:
                return value(st.expr) ? exec(st.body, loops) : exec(st.else_body, loops);
            case StmtKind::for_loop: {
                std::uint64_t hi = st.bound.value;
                if (st.bound.kind == jash::BoundKind::s) hi = env_.s;
                if (st.bound.kind == jash::BoundKind::n) hi = static_cast<std::uint64_t>(env_.n);
                for (std::uint64_t i = st.start; i <= hi; ++i) {
                    tick();
                    vars_[st.var] = i;
                    if (exec(st.body, loops + 1) == Ctl::brk) break;
                    if (i == UINT64_MAX) break;
                }
                return Ctl::go;
            }
            case StmtKind::while_loop: {
                std::uint64_t checks = 0;
                while (true) {
                    ++checks;
                    out_.max_condition_checks = std::max(out_.max_condition_checks, checks);
                    if (checks >= stop_checks_) throw Stop{};
                    if (!value(st.expr)) break;
                    if (exec(st.body, loops + 1) == Ctl::brk) break;
                }
                return Ctl::go;
            }
        }
        return Ctl::go;
    }

    std::uint64_t value(const jash::Expr& e) const {
        using jash::ExprKind;
        using jash::BinOp;
        switch (e.kind) {
            case ExprKind::literal: return e.value;
            case ExprKind::variable: {
                auto it = vars_.find(e.name);
                return it != vars_.end() ? it->second : 0;
            }
            case ExprKind::symbol_s: return env_.s;
            case ExprKind::symbol_n: return static_cast<std::uint64_t>(env_.n);
            case ExprKind::argval: return env_.arg;
            case ExprKind::argbit: {
                const std::uint64_t i = value(e.operands[0]);
                if (i >= static_cast<std::uint64_t>(env_.n)) return 0;
                return (env_.arg >> (env_.n - 1 - static_cast<int>(i))) & 1;
            }
            case ExprKind::data: {
                const std::uint64_t off = value(e.operands[0]);
                const std::uint64_t len = std::min<std::uint64_t>(value(e.operands[1]), 8);
                std::uint64_t v = 0;
                for (std::uint64_t k = 0; k < len; ++k) {
                    const std::uint64_t at = off + k;
                    const bool inside = at >= off && at < env_.window.size();
                    v = v * 256 + (inside ? env_.window[at] : 0);
                }
                return v;
            }
            case ExprKind::logical_not: return value(e.operands[0]) == 0;
            case ExprKind::binary: {
                const std::uint64_t a = value(e.operands[0]);
                const std::uint64_t b = value(e.operands[1]);
                switch (e.op) {
                    case BinOp::add: return a + b;
                    case BinOp::sub: return a - b;
                    case BinOp::mul: return a * b;
                    case BinOp::div: return b ? a / b : 0;
                    case BinOp::mod: return b ? a % b : 0;
                    case BinOp::bit_and: return a & b;
                    case BinOp::bit_or: return a | b;
                    case BinOp::bit_xor: return a ^ b;
                    case BinOp::shl: return b < 64 ? a << b : 0;
                    case BinOp::shr: return b < 64 ? a >> b : 0;
                    case BinOp::eq: return a == b ? 1 : 0;
                    case BinOp::ne: return a != b ? 1 : 0;
                    case BinOp::lt: return a < b ? 1 : 0;
                    case BinOp::le: return a <= b ? 1 : 0;
                    case BinOp::gt: return a > b ? 1 : 0;
                    case BinOp::ge: return a >= b ? 1 : 0;
                }
            }
        }
        return 0;
    }

    RefEnv env_;
    std::uint64_t stop_checks_;
    std::uint64_t cap_;
    RefOutcome out_;
    std::map<std::string, std::uint64_t> vars_;
};

}  // namespace pnpchain::testing
