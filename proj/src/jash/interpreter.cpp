// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/jash/interpreter.hpp"

#include <unordered_map>

#include "pnpchain/error.hpp"

namespace pnpchain::jash {

ByteView BundleWindows::window(std::uint64_t argval) const {
    if (!record_size_) return bundle_;
    const std::uint64_t size = *record_size_;
    if (size == 0 || argval > bundle_.size() / size) return {};
    const std::uint64_t offset = argval * size;
    if (offset + size > bundle_.size()) return {};
    return bundle_.subspan(offset, size);
}

const char* halt_name(HaltReason reason) noexcept {
    switch (reason) {
        case HaltReason::output_stmt: return "output_stmt";
        case HaltReason::end_of_program: return "end_of_program";
        case HaltReason::sentinel: return "sentinel";
    }
    return "unknown";
}

namespace {

enum class Flow { next, broke, halted, ended };

/// `if (v == s) { output <literal> exit }` where v is the innermost loop variable.
bool is_sentinel_guard(const Stmt& s, const std::string* loop_var) {
    if (loop_var == nullptr || s.has_else || s.body.size() != 1) return false;
    const Expr& c = s.expr;
    if (c.kind != ExprKind::binary || c.op != BinOp::eq) return false;
    if (c.operands[0].kind != ExprKind::variable || c.operands[0].name != *loop_var) return false;
    if (c.operands[1].kind != ExprKind::symbol_s) return false;
    const Stmt& out = s.body.front();
    return out.kind == StmtKind::output && out.expr.kind == ExprKind::literal;
}

class Machine {
public:
    Machine(const JashMeta& meta, const Bits& arg, ByteView window, std::uint64_t budget)
        : meta_(meta), arg_(arg), window_(window), budget_(budget) {}

    ExecResult run(const Block& program) {
        ExecResult result;
        result.res = Bits::zeros(meta_.m);
        if (block(program, nullptr, false) == Flow::halted) {
            result.res = Bits(mask_to(output_, meta_.m), meta_.m);
            result.halted_by = sentinel_ ? HaltReason::sentinel : HaltReason::output_stmt;
        }
        result.steps_used = steps_;
        return result;
    }

private:
    void charge() {
        if (steps_ >= budget_) {
            throw Error(Errc::step_budget_exceeded,
                        "execution exceeded its static bound of " + std::to_string(budget_) + " steps");
        }
        ++steps_;
    }

    Flow block(const Block& stmts, const std::string* loop_var, bool in_guard) {
        for (const auto& s : stmts) {
            const Flow f = stmt(s, loop_var, in_guard);
            if (f != Flow::next) return f;
        }
        return Flow::next;
    }

    Flow stmt(const Stmt& s, const std::string* loop_var, bool in_guard) {
        charge();
        switch (s.kind) {
            case StmtKind::assign:
                vars_[s.var] = eval(s.expr);
                return Flow::next;
            case StmtKind::output:
                output_ = eval(s.expr);
                sentinel_ = in_guard;
                return Flow::halted;
            case StmtKind::break_loop:
                // Outside any loop a break ends the program.
                return loop_var == nullptr ? Flow::ended : Flow::broke;
            case StmtKind::if_else:
                if (eval(s.expr) != 0) {
                    return block(s.body, loop_var, is_sentinel_guard(s, loop_var));
                }
                return block(s.else_body, loop_var, false);
            case StmtKind::for_loop:
                return loop(s);
            case StmtKind::while_loop:
                throw Error(Errc::not_validated, "while loops cannot be executed");
        }
        return Flow::next;
    }

    Flow loop(const Stmt& s) {
        std::uint64_t last = 0;
        switch (s.bound.kind) {
            case BoundKind::literal: last = s.bound.value; break;
            case BoundKind::s: last = meta_.s; break;
            case BoundKind::n: last = static_cast<std::uint64_t>(meta_.n); break;
        }
        if (s.start > last) return Flow::next;
        const std::uint64_t trips = last - s.start + 1;
        for (std::uint64_t k = 0; k < trips; ++k) {
            charge();
            vars_[s.var] = s.start + k;
            const Flow f = block(s.body, &s.var, false);
            if (f == Flow::broke) break;
            if (f == Flow::halted || f == Flow::ended) return f;
        }
        return Flow::next;
    }

    std::uint64_t eval(const Expr& e) const {
        switch (e.kind) {
            case ExprKind::literal: return e.value;
            case ExprKind::variable: {
                const auto it = vars_.find(e.name);
                return it == vars_.end() ? 0 : it->second;
            }
            case ExprKind::symbol_s: return meta_.s;
            case ExprKind::symbol_n: return static_cast<std::uint64_t>(meta_.n);
            case ExprKind::argval: return arg_.value();
            case ExprKind::argbit: {
                const std::uint64_t i = eval(e.operands[0]);
                const auto width = static_cast<std::uint64_t>(arg_.width());
                return i < width ? (arg_.value() >> (width - 1 - i)) & 1U : 0;
            }
            case ExprKind::data: return read_data(eval(e.operands[0]), eval(e.operands[1]));
            case ExprKind::logical_not: return eval(e.operands[0]) == 0 ? 1 : 0;
            case ExprKind::binary: return binary(e.op, eval(e.operands[0]), eval(e.operands[1]));
        }
        return 0;
    }

    std::uint64_t read_data(std::uint64_t offset, std::uint64_t length) const {
        if (length > 8) length = 8;
        std::uint64_t value = 0;
        for (std::uint64_t k = 0; k < length; ++k) {
            std::uint64_t byte = 0;
            if (offset < window_.size() && k < window_.size() - offset) byte = window_[offset + k];
            value = (value << 8) | byte;
        }
        return value;
    }

    static std::uint64_t binary(BinOp op, std::uint64_t a, std::uint64_t b) {
        switch (op) {
            case BinOp::add: return a + b;
            case BinOp::sub: return a - b;
            case BinOp::mul: return a * b;
            case BinOp::div: return b == 0 ? 0 : a / b;
            case BinOp::mod: return b == 0 ? 0 : a % b;
            case BinOp::bit_and: return a & b;
            case BinOp::bit_or: return a | b;
            case BinOp::bit_xor: return a ^ b;
            case BinOp::shl: return b >= 64 ? 0 : a << b;
            case BinOp::shr: return b >= 64 ? 0 : a >> b;
            case BinOp::eq: return a == b;
            case BinOp::ne: return a != b;
            case BinOp::lt: return a < b;
            case BinOp::le: return a <= b;
            case BinOp::gt: return a > b;
            case BinOp::ge: return a >= b;
        }
        return 0;
    }

    const JashMeta& meta_;
    const Bits& arg_;
    ByteView window_;
    std::uint64_t budget_;
    std::uint64_t steps_ = 0;
    std::uint64_t output_ = 0;
    bool sentinel_ = false;
    std::unordered_map<std::string, std::uint64_t> vars_;
};

}  // namespace

BoundedJash::BoundedJash(JashProgram prog, JashMeta meta)
    : prog_(std::move(prog)), meta_(std::move(meta)) {
    const ValidationReport report = validate(prog_, meta_);
    if (!report.ok()) {
        throw Error(Errc::not_validated, "jash '" + meta_.jash_id + "' failed validation: " +
                                             report.summary());
    }
    bound_ = complexity_bound(prog_, meta_);
}

ExecResult BoundedJash::run(const Bits& arg, const DataWindowProvider& data) const {
    meta_.check_arg(arg);
    return execute_unchecked(prog_, meta_, arg, data, bound_.worst_case_steps);
}

ExecResult execute(const JashProgram& prog, const JashMeta& meta, const Bits& arg,
                   const DataWindowProvider& data) {
    meta.check_arg(arg);
    const ValidationReport report = validate(prog, meta);
    if (!report.ok()) throw Error(Errc::not_validated, "program failed validation: " + report.summary());
    return execute_unchecked(prog, meta, arg, data, complexity_bound(prog, meta).worst_case_steps);
}

ExecResult execute_unchecked(const JashProgram& prog, const JashMeta& meta, const Bits& arg,
                             const DataWindowProvider& data, std::uint64_t step_budget) {
    Machine machine(meta, arg, data.window(arg.value()), step_budget);
    return machine.run(prog.statements);
}

}  // namespace pnpchain::jash
