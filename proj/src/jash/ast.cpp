// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/jash/ast.hpp"

namespace pnpchain::jash {

Expr Expr::literal(std::uint64_t v) {
    Expr e;
    e.value = v;
    return e;
}

Expr Expr::bit_literal(std::uint64_t v, int digit_count) {
    Expr e = literal(v);
    e.form = LiteralForm::binary;
    e.digits = digit_count;
    return e;
}

Expr Expr::variable(std::string n) {
    Expr e = of(ExprKind::variable);
    e.name = std::move(n);
    return e;
}

Expr Expr::argbit(Expr index) {
    Expr e = of(ExprKind::argbit);
    e.operands.push_back(std::move(index));
    return e;
}

Expr Expr::data(Expr offset, Expr length) {
    Expr e = of(ExprKind::data);
    e.operands.push_back(std::move(offset));
    e.operands.push_back(std::move(length));
    return e;
}

Expr Expr::logical_not(Expr operand) {
    Expr e = of(ExprKind::logical_not);
    e.operands.push_back(std::move(operand));
    return e;
}

Expr Expr::binary(BinOp op, Expr lhs, Expr rhs) {
    Expr e = of(ExprKind::binary);
    e.op = op;
    e.operands.push_back(std::move(lhs));
    e.operands.push_back(std::move(rhs));
    return e;
}

Stmt Stmt::assign(std::string target, Expr value) {
    Stmt s;
    s.kind = StmtKind::assign;
    s.var = std::move(target);
    s.expr = std::move(value);
    return s;
}

Stmt Stmt::if_else(Expr cond, std::vector<Stmt> then_body) {
    Stmt s;
    s.kind = StmtKind::if_else;
    s.expr = std::move(cond);
    s.body = std::move(then_body);
    return s;
}

Stmt Stmt::if_else(Expr cond, std::vector<Stmt> then_body, std::vector<Stmt> else_body) {
    Stmt s = if_else(std::move(cond), std::move(then_body));
    s.else_body = std::move(else_body);
    s.has_else = true;
    return s;
}

Stmt Stmt::for_loop(std::string var, std::uint64_t start, LoopBound bound, std::vector<Stmt> body) {
    Stmt s;
    s.kind = StmtKind::for_loop;
    s.var = std::move(var);
    s.start = start;
    s.bound = bound;
    s.body = std::move(body);
    return s;
}

Stmt Stmt::while_loop(Expr cond, std::vector<Stmt> body) {
    Stmt s;
    s.kind = StmtKind::while_loop;
    s.expr = std::move(cond);
    s.body = std::move(body);
    return s;
}

Stmt Stmt::break_loop() {
    Stmt s;
    s.kind = StmtKind::break_loop;
    return s;
}

Stmt Stmt::output(Expr value, bool exit) {
    Stmt s;
    s.kind = StmtKind::output;
    s.expr = std::move(value);
    s.exit = exit;
    return s;
}

}  // namespace pnpchain::jash
