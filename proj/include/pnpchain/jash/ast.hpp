// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pnpchain::jash {

enum class ExprKind {
    literal,
    variable,
    symbol_s,
    symbol_n,
    argval,
    argbit,    // argbit(index), MSB-first
    data,      // data(offset, len)
    logical_not,
    binary,
};

enum class BinOp {
    add, sub, mul, div, mod,
    bit_and, bit_or, bit_xor, shl, shr,
    eq, ne, lt, le, gt, ge,
};

enum class LiteralForm { decimal, binary };

/// Expression node. Operands live in `operands` (1 for not/argbit, 2 for binary/data).
struct Expr {
    ExprKind kind = ExprKind::literal;
    std::uint64_t value = 0;
    LiteralForm form = LiteralForm::decimal;
    int digits = 0;  // binary literals keep their digit count so they print back identically
    std::string name;
    BinOp op = BinOp::add;
    std::vector<Expr> operands;

    static Expr literal(std::uint64_t v);
    static Expr bit_literal(std::uint64_t v, int digit_count);
    static Expr variable(std::string n);
    static Expr symbol_s() { return of(ExprKind::symbol_s); }
    static Expr symbol_n() { return of(ExprKind::symbol_n); }
    static Expr argval() { return of(ExprKind::argval); }
    static Expr argbit(Expr index);
    static Expr data(Expr offset, Expr length);
    static Expr logical_not(Expr operand);
    static Expr binary(BinOp op, Expr lhs, Expr rhs);

    bool operator==(const Expr&) const = default;

private:
    static Expr of(ExprKind k) {
        Expr e;
        e.kind = k;
        return e;
    }
};

enum class StmtKind { assign, if_else, for_loop, while_loop, break_loop, output };

enum class BoundKind { literal, s, n };

struct LoopBound {
    BoundKind kind = BoundKind::literal;
    std::uint64_t value = 0;  // literal only

    bool operator==(const LoopBound&) const = default;
};

struct Stmt {
    StmtKind kind = StmtKind::assign;
    std::string var;               // assign target or loop variable
    Expr expr;                     // assigned value, condition, or output value
    std::uint64_t start = 1;       // for-loop start literal
    LoopBound bound;               // for-loop bound
    std::vector<Stmt> body;        // then-branch or loop body
    std::vector<Stmt> else_body;
    bool has_else = false;
    bool exit = false;             // `output e exit`

    static Stmt assign(std::string target, Expr value);
    static Stmt if_else(Expr cond, std::vector<Stmt> then_body);
    static Stmt if_else(Expr cond, std::vector<Stmt> then_body, std::vector<Stmt> else_body);
    static Stmt for_loop(std::string var, std::uint64_t start, LoopBound bound, std::vector<Stmt> body);
    static Stmt while_loop(Expr cond, std::vector<Stmt> body);
    static Stmt break_loop();
    static Stmt output(Expr value, bool exit = false);

    bool operator==(const Stmt&) const = default;
};

using Block = std::vector<Stmt>;

/// A parsed jash. Equality is structural and ignores `source_text`.
struct JashProgram {
    Block statements;
    std::string source_text;  // canonical rendering of `statements`

    friend bool operator==(const JashProgram& a, const JashProgram& b) {
        return a.statements == b.statements;
    }
};

}  // namespace pnpchain::jash
