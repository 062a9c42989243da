// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/jash/transform.hpp"

#include <set>

#include "pnpchain/error.hpp"
#include "pnpchain/jash/parser.hpp"

namespace pnpchain::jash {

namespace {

void collect_names(const Expr& e, std::set<std::string>& out) {
    if (e.kind == ExprKind::variable) out.insert(e.name);
    for (const auto& operand : e.operands) collect_names(operand, out);
}

void collect_names(const Block& block, std::set<std::string>& out) {
    for (const auto& s : block) {
        if (!s.var.empty()) out.insert(s.var);
        collect_names(s.expr, out);
        collect_names(s.body, out);
        collect_names(s.else_body, out);
    }
}

class Rewriter {
public:
    Rewriter(const JashMeta& meta, std::set<std::string> taken)
        : meta_(meta), taken_(std::move(taken)) {}

    Block block(const Block& in) {
        Block out;
        out.reserve(in.size());
        for (const auto& s : in) out.push_back(stmt(s));
        return out;
    }

private:
    Stmt stmt(const Stmt& s) {
        Stmt copy = s;
        copy.body = block(s.body);
        copy.else_body = block(s.else_body);
        if (s.kind != StmtKind::while_loop) return copy;

        const std::string var = fresh();
        Block body;
        body.push_back(Stmt::if_else(
            Expr::binary(BinOp::eq, Expr::variable(var), Expr::symbol_s()),
            {Stmt::output(Expr::bit_literal(meta_.dnf_sentinel.value(), meta_.m), true)}));
        body.push_back(Stmt::if_else(Expr::logical_not(s.expr), {Stmt::break_loop()}));
        for (auto& inner : copy.body) body.push_back(std::move(inner));
        return Stmt::for_loop(var, 1, LoopBound{BoundKind::s, 0}, std::move(body));
    }

    std::string fresh() {
        constexpr unsigned kAttempts = 1U << 16;
        for (unsigned i = 0; i < kAttempts; ++i) {
            std::string name = "_w" + std::to_string(counter_++);
            if (taken_.insert(name).second) return name;
        }
        throw Error(Errc::transform, "could not generate a fresh loop variable");
    }

    const JashMeta& meta_;
    std::set<std::string> taken_;
    unsigned counter_ = 1;
};

}  // namespace

JashProgram transform_bounded(const JashProgram& prog, const JashMeta& meta) {
    std::set<std::string> taken;
    collect_names(prog.statements, taken);
    Rewriter rewriter(meta, std::move(taken));
    return make_program(rewriter.block(prog.statements));
}

}  // namespace pnpchain::jash
