// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/jash/parser.hpp"

#include <array>
#include <cctype>
#include <limits>
#include <set>

#include "pnpchain/error.hpp"

namespace pnpchain::jash {

namespace {

enum class Tok { ident, integer, bits, punct, end };

struct Token {
    Tok type = Tok::end;
    std::string text;
    std::uint64_t value = 0;
    int digits = 0;
    int line = 1;
    int column = 1;
};

constexpr std::array<std::string_view, 14> kReserved = {
    "if", "else", "for", "while", "break", "output", "exit",
    "argval", "argbit", "data", "s", "n", "arg", "return",
};

bool is_reserved(std::string_view word) {
    for (const auto r : kReserved) {
        if (r == word) return true;
    }
    return false;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = column_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.type = Tok::ident;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                    t.text.push_back(advance());
                }
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                lex_number(t);
            } else {
                t.type = Tok::punct;
                static constexpr std::array<std::string_view, 10> two = {
                    "<=", ">=", "==", "!=", "<<", ">>", "++", "&&", "||", "--"};
                bool matched = false;
                for (const auto op : two) {
                    if (src_.substr(pos_, 2) == op) {
                        t.text = std::string(op);
                        advance();
                        advance();
                        matched = true;
                        break;
                    }
                }
                if (!matched) {
                    static constexpr std::string_view single = "+-*/%&|^<>=!(){};,";
                    if (single.find(c) == std::string_view::npos) {
                        throw SyntaxError(std::string("unexpected character '") + c + "'", line_, column_);
                    }
                    t.text.push_back(advance());
                }
            }
            out.push_back(std::move(t));
        }
    }

private:
    char advance() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    void lex_number(Token& t) {
        const int line = line_;
        const int column = column_;
        if (src_.substr(pos_, 2) == "0b") {
            advance();
            advance();
            t.type = Tok::bits;
            while (pos_ < src_.size() && (src_[pos_] == '0' || src_[pos_] == '1')) {
                if (t.digits == 64) throw SyntaxError("binary literal wider than 64 bits", line, column);
                t.value = (t.value << 1) | static_cast<std::uint64_t>(advance() - '0');
                ++t.digits;
            }
            if (t.digits == 0) throw SyntaxError("empty binary literal", line, column);
        } else {
            t.type = Tok::integer;
            constexpr auto max = std::numeric_limits<std::uint64_t>::max();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                const auto digit = static_cast<std::uint64_t>(advance() - '0');
                if (t.value > (max - digit) / 10) {
                    throw SyntaxError("integer literal exceeds 64 bits", line, column);
                }
                t.value = t.value * 10 + digit;
            }
        }
        if (pos_ < src_.size() &&
            (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            throw SyntaxError("malformed number literal", line, column);
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

struct OpInfo {
    std::string_view text;
    BinOp op;
    int precedence;
};

constexpr std::array<OpInfo, 16> kBinaryOps = {{
    {"|", BinOp::bit_or, 1},  {"^", BinOp::bit_xor, 2}, {"&", BinOp::bit_and, 3},
    {"==", BinOp::eq, 4},     {"!=", BinOp::ne, 4},      {"<", BinOp::lt, 5},
    {"<=", BinOp::le, 5},     {">", BinOp::gt, 5},       {">=", BinOp::ge, 5},
    {"<<", BinOp::shl, 6},    {">>", BinOp::shr, 6},     {"+", BinOp::add, 7},
    {"-", BinOp::sub, 7},     {"*", BinOp::mul, 8},      {"/", BinOp::div, 8},
    {"%", BinOp::mod, 8},
}};

constexpr int kUnaryPrecedence = 9;

const OpInfo* find_op(std::string_view text) {
    for (const auto& info : kBinaryOps) {
        if (info.text == text) return &info;
    }
    return nullptr;
}

const OpInfo& op_info(BinOp op) {
    for (const auto& info : kBinaryOps) {
        if (info.op == op) return info;
    }
    return kBinaryOps[0];
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Block program() {
        Block out;
        while (peek().type != Tok::end) out.push_back(statement());
        return out;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool at_punct(std::string_view p) const {
        return peek().type == Tok::punct && peek().text == p;
    }
    bool at_word(std::string_view w) const {
        return peek().type == Tok::ident && peek().text == w;
    }

    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = peek();
        const std::string got = t.type == Tok::end ? "end of input" : "'" + t.text + "'";
        throw SyntaxError(message + ", got " + got, t.line, t.column);
    }

    void expect_punct(std::string_view p) {
        if (!at_punct(p)) fail("expected '" + std::string(p) + "'");
        next();
    }

    std::string expect_ident() {
        if (peek().type != Tok::ident) fail("expected identifier");
        if (is_reserved(peek().text)) fail("reserved word cannot be used as a variable");
        return next().text;
    }

    std::uint64_t expect_int() {
        if (peek().type != Tok::integer) fail("expected integer literal");
        return next().value;
    }

    Block block() {
        expect_punct("{");
        Block out;
        while (!at_punct("}")) {
            if (peek().type == Tok::end) fail("unterminated block");
            out.push_back(statement());
        }
        next();
        return out;
    }

    Stmt statement() {
        if (peek().type != Tok::ident) fail("expected statement");
        const std::string& word = peek().text;
        if (word == "if") return if_statement();
        if (word == "for") return for_statement();
        if (word == "while") {
            next();
            expect_punct("(");
            Expr cond = expression(0);
            expect_punct(")");
            return Stmt::while_loop(std::move(cond), block());
        }
        if (word == "break") {
            next();
            return Stmt::break_loop();
        }
        if (word == "output") {
            next();
            Expr value = expression(0);
            bool exit = false;
            if (at_word("exit")) {
                next();
                exit = true;
            }
            return Stmt::output(std::move(value), exit);
        }
        if (word == "return") fail("functions and return are not part of jash-mini");
        const Token& name_tok = peek();
        if (is_reserved(word)) fail("reserved word cannot be assigned");
        std::string target = next().text;
        if (at_punct("(")) {
            throw UnknownIdentifier(target, name_tok.line, name_tok.column);
        }
        expect_punct("=");
        Expr value = expression(0);
        assigned_.insert(target);
        return Stmt::assign(std::move(target), std::move(value));
    }

    Stmt if_statement() {
        next();
        expect_punct("(");
        Expr cond = expression(0);
        expect_punct(")");
        Block then_body = block();
        if (!at_word("else")) return Stmt::if_else(std::move(cond), std::move(then_body));
        next();
        Block else_body;
        if (at_word("if")) {
            else_body.push_back(if_statement());
        } else {
            else_body = block();
        }
        return Stmt::if_else(std::move(cond), std::move(then_body), std::move(else_body));
    }

    Stmt for_statement() {
        next();
        expect_punct("(");
        std::string var = expect_ident();
        expect_punct("=");
        const std::uint64_t start = expect_int();
        expect_punct(";");
        if (peek().type != Tok::ident || peek().text != var) fail("for condition must test '" + var + "'");
        next();
        expect_punct("<=");
        LoopBound bound;
        if (at_word("s")) {
            next();
            bound.kind = BoundKind::s;
        } else if (at_word("n")) {
            next();
            bound.kind = BoundKind::n;
        } else if (peek().type == Tok::integer) {
            bound.kind = BoundKind::literal;
            bound.value = next().value;
        } else {
            fail("for bound must be an integer literal, 's' or 'n'");
        }
        expect_punct(";");
        if (peek().type != Tok::ident || peek().text != var) fail("for increment must be '" + var + "++'");
        next();
        expect_punct("++");
        expect_punct(")");
        assigned_.insert(var);
        return Stmt::for_loop(std::move(var), start, bound, block());
    }

    Expr expression(int min_precedence) {
        Expr lhs = unary();
        while (peek().type == Tok::punct) {
            const OpInfo* info = find_op(peek().text);
            if (info == nullptr || info->precedence < min_precedence) break;
            next();
            Expr rhs = expression(info->precedence + 1);
            lhs = Expr::binary(info->op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr unary() {
        if (at_punct("!")) {
            next();
            return Expr::logical_not(unary());
        }
        return primary();
    }

    Expr primary() {
        const Token& t = peek();
        if (t.type == Tok::integer) return Expr::literal(next().value);
        if (t.type == Tok::bits) {
            const Token& b = next();
            return Expr::bit_literal(b.value, b.digits);
        }
        if (at_punct("(")) {
            next();
            Expr inner = expression(0);
            expect_punct(")");
            return inner;
        }
        if (t.type != Tok::ident) fail("expected expression");
        const Token name_tok = next();
        const std::string& name = name_tok.text;
        if (name == "argval" || name == "arg") return Expr::argval();
        if (name == "s") return Expr::symbol_s();
        if (name == "n") return Expr::symbol_n();
        if (name == "argbit") {
            expect_punct("(");
            Expr index = expression(0);
            expect_punct(")");
            return Expr::argbit(std::move(index));
        }
        if (name == "data") {
            expect_punct("(");
            Expr offset = expression(0);
            expect_punct(",");
            Expr length = expression(0);
            expect_punct(")");
            return Expr::data(std::move(offset), std::move(length));
        }
        if (is_reserved(name)) {
            throw SyntaxError("unexpected keyword '" + name + "' in expression", name_tok.line,
                              name_tok.column);
        }
        if (at_punct("(") || !assigned_.contains(name)) {
            throw UnknownIdentifier(name, name_tok.line, name_tok.column);
        }
        return Expr::variable(name);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::set<std::string> assigned_;
};

void print_expr(const Expr& e, std::string& out);

void print_operand(const Expr& e, int min_precedence, std::string& out) {
    if (e.kind == ExprKind::binary && op_info(e.op).precedence < min_precedence) {
        out.push_back('(');
        print_expr(e, out);
        out.push_back(')');
    } else {
        print_expr(e, out);
    }
}

void print_expr(const Expr& e, std::string& out) {
    switch (e.kind) {
        case ExprKind::literal:
            if (e.form == LiteralForm::binary) {
                out += "0b";
                for (int i = e.digits - 1; i >= 0; --i) out.push_back(((e.value >> i) & 1U) ? '1' : '0');
            } else {
                out += std::to_string(e.value);
            }
            return;
        case ExprKind::variable: out += e.name; return;
        case ExprKind::symbol_s: out += "s"; return;
        case ExprKind::symbol_n: out += "n"; return;
        case ExprKind::argval: out += "argval"; return;
        case ExprKind::argbit:
            out += "argbit(";
            print_expr(e.operands[0], out);
            out += ")";
            return;
        case ExprKind::data:
            out += "data(";
            print_expr(e.operands[0], out);
            out += ", ";
            print_expr(e.operands[1], out);
            out += ")";
            return;
        case ExprKind::logical_not:
            out += "!";
            print_operand(e.operands[0], kUnaryPrecedence + 1, out);
            return;
        case ExprKind::binary: {
            const OpInfo& info = op_info(e.op);
            print_operand(e.operands[0], info.precedence, out);
            out += " ";
            out += info.text;
            out += " ";
            print_operand(e.operands[1], info.precedence + 1, out);
            return;
        }
    }
}

void print_block(const Block& block, int depth, std::string& out);

void print_stmt(const Stmt& s, int depth, std::string& out) {
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    out += indent;
    switch (s.kind) {
        case StmtKind::assign:
            out += s.var + " = ";
            print_expr(s.expr, out);
            out += "\n";
            return;
        case StmtKind::if_else:
            out += "if (";
            print_expr(s.expr, out);
            out += ") {\n";
            print_block(s.body, depth + 1, out);
            out += indent + "}";
            if (s.has_else) {
                out += " else {\n";
                print_block(s.else_body, depth + 1, out);
                out += indent + "}";
            }
            out += "\n";
            return;
        case StmtKind::for_loop: {
            out += "for (" + s.var + " = " + std::to_string(s.start) + "; " + s.var + " <= ";
            switch (s.bound.kind) {
                case BoundKind::literal: out += std::to_string(s.bound.value); break;
                case BoundKind::s: out += "s"; break;
                case BoundKind::n: out += "n"; break;
            }
            out += "; " + s.var + "++) {\n";
            print_block(s.body, depth + 1, out);
            out += indent + "}\n";
            return;
        }
        case StmtKind::while_loop:
            out += "while (";
            print_expr(s.expr, out);
            out += ") {\n";
            print_block(s.body, depth + 1, out);
            out += indent + "}\n";
            return;
        case StmtKind::break_loop: out += "break\n"; return;
        case StmtKind::output:
            out += "output ";
            print_expr(s.expr, out);
            if (s.exit) out += " exit";
            out += "\n";
            return;
    }
}

void print_block(const Block& block, int depth, std::string& out) {
    for (const auto& s : block) print_stmt(s, depth, out);
}

}  // namespace

JashProgram parse(std::string_view source) {
    Parser parser(Lexer(source).run());
    return make_program(parser.program());
}

std::string print(const Block& statements) {
    std::string out;
    print_block(statements, 0, out);
    return out;
}

std::string print(const Expr& expr) {
    std::string out;
    print_expr(expr, out);
    return out;
}

JashProgram make_program(Block statements) {
    JashProgram p;
    p.source_text = print(statements);
    p.statements = std::move(statements);
    return p;
}

}  // namespace pnpchain::jash
