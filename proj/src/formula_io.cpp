#include "toda/formula_io.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace toda {

ParseError::ParseError(ErrorKind kind, int line, int column, const std::string& what)
    : FormulaError(kind, std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
    enum Kind { Open, Close, Word, End } kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip();
        Token t{Token::End, "", line_, col_};
        if (pos_ >= text_.size()) return t;
        const char c = text_[pos_];
        if (c == '(' || c == ')') {
            t.kind = c == '(' ? Token::Open : Token::Close;
            t.text = std::string(1, c);
            advance();
            return t;
        }
        t.kind = Token::Word;
        while (pos_ < text_.size()) {
            const char d = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
            t.text.push_back(d);
            advance();
        }
        return t;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) { cur_ = lex_.next(); }

    Formula sentence() {
        const Token start = cur_;
        expect_open();
        expect_word("sentence");
        std::vector<VarBlock> free;
        std::vector<QuantLevel> prefix;
        Expr body;
        std::vector<std::pair<Token, std::string>> level_pos;
        if (peek_head("free")) {
            expect_open();
            expect_word("free");
            do free.push_back(blockdecl());
            while (cur_.kind == Token::Open);
            expect_close();
        }
        if (peek_head("prefix")) {
            expect_open();
            expect_word("prefix");
            do {
                const Token at = cur_;
                prefix.push_back(qblock());
                if (prefix.size() > 1 && prefix[prefix.size() - 2].quantifier == prefix.back().quantifier)
                    fail(ErrorKind::Alternation, at, "quantifier blocks must alternate");
            } while (cur_.kind == Token::Open);
            expect_close();
        }
        if (!peek_head("body")) fail(ErrorKind::Syntax, cur_, "expected (body ...)");
        expect_open();
        expect_word("body");
        body = boolean();
        expect_close();
        expect_close();
        if (cur_.kind != Token::End) fail(ErrorKind::Syntax, cur_, "trailing input");
        try {
            return Formula(std::move(free), std::move(prefix), std::move(body));
        } catch (const FormulaError& e) {
            throw ParseError(e.kind(), start.line, start.column, e.what());
        }
    }

private:
    [[noreturn]] void fail(ErrorKind kind, const Token& at, const std::string& msg) {
        throw ParseError(kind, at.line, at.column, msg);
    }

    void bump() { cur_ = lex_.next(); }

    void expect_open() {
        if (cur_.kind != Token::Open) fail(ErrorKind::Syntax, cur_, "expected '('");
        bump();
    }

    void expect_close() {
        if (cur_.kind != Token::Close) fail(ErrorKind::Syntax, cur_, "expected ')'");
        bump();
    }

    void expect_word(const std::string& w) {
        if (cur_.kind != Token::Word || cur_.text != w) fail(ErrorKind::Syntax, cur_, "expected '" + w + "'");
        bump();
    }

    std::string word() {
        if (cur_.kind != Token::Word) fail(ErrorKind::Syntax, cur_, "expected a word");
        std::string w = cur_.text;
        bump();
        return w;
    }

    // Looks one token past an open paren without consuming input.
    bool peek_head(const std::string& head) {
        if (cur_.kind != Token::Open) return false;
        Lexer copy = lex_;
        const Token t = copy.next();
        return t.kind == Token::Word && t.text == head;
    }

    int integer() {
        const Token t = cur_;
        const std::string w = word();
        int v = 0;
        auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc() || ptr != w.data() + w.size()) fail(ErrorKind::Syntax, t, "expected an integer");
        return v;
    }

    Rational rational() {
        const Token t = cur_;
        const std::string w = word();
        try {
            return parse_rational(w);
        } catch (const std::invalid_argument& e) {
            fail(ErrorKind::Syntax, t, e.what());
        }
    }

    std::optional<Rational> radius() {
        if (!peek_head("radius2")) return std::nullopt;
        expect_open();
        expect_word("radius2");
        Rational r = rational();
        expect_close();
        return r;
    }

    // After the opening paren of a blockdecl.
    VarBlock blockdecl_body() {
        VarBlock b;
        b.name = word();
        if (cur_.kind == Token::Word) {
            b.parts.push_back(Part{b.name, integer()});
            if (auto r = radius()) b.radius_sq = *r;
        } else {
            if (auto r = radius()) b.radius_sq = *r;
            expect_open();
            expect_word("parts");
            do {
                expect_open();
                Part p;
                p.name = word();
                p.dim = integer();
                expect_close();
                b.parts.push_back(std::move(p));
            } while (cur_.kind == Token::Open);
            expect_close();
        }
        expect_close();
        return b;
    }

    VarBlock blockdecl() {
        expect_open();
        return blockdecl_body();
    }

    QuantLevel qblock() {
        expect_open();
        QuantLevel level;
        const Token q = cur_;
        const std::string w = word();
        if (w == "exists") {
            level.quantifier = Quantifier::Exists;
        } else if (w == "forall") {
            level.quantifier = Quantifier::Forall;
        } else {
            fail(ErrorKind::Syntax, q, "expected 'exists' or 'forall'");
        }
        if (cur_.kind == Token::Word) {
            VarBlock b;
            b.name = word();
            b.parts.push_back(Part{b.name, integer()});
            level.blocks.push_back(std::move(b));
            expect_close();
        } else {
            do level.blocks.push_back(blockdecl());
            while (cur_.kind == Token::Open);
            expect_close();
        }
        return level;
    }

    Expr boolean() {
        const Token at = cur_;
        expect_open();
        const std::string head = word();
        if (head == "atom") {
            const Token st = cur_;
            auto sign = parse_sign(word());
            if (!sign) fail(ErrorKind::Syntax, st, "unknown sign");
            Polynomial p = poly();
            expect_word("0");
            expect_close();
            return make_atom(std::move(p), *sign);
        }
        if (head == "and" || head == "or") {
            std::vector<Expr> kids;
            do kids.push_back(boolean());
            while (cur_.kind == Token::Open);
            expect_close();
            return head == "and" ? make_and(std::move(kids)) : make_or(std::move(kids));
        }
        if (head == "not") {
            Expr e = boolean();
            expect_close();
            return make_not(std::move(e));
        }
        fail(ErrorKind::Syntax, at, "unknown connective '" + head + "'");
    }

    Polynomial poly() {
        expect_open();
        expect_word("poly");
        Polynomial p;
        do {
            expect_open();
            expect_word("mono");
            Rational c = rational();
            Monomial m;
            while (cur_.kind == Token::Open) {
                expect_open();
                const Token vt = cur_;
                const std::string v = word();
                const auto dot = v.rfind('.');
                if (dot == std::string::npos || dot == 0 || dot + 1 == v.size())
                    fail(ErrorKind::Syntax, vt, "expected NAME.INDEX");
                int idx = 0;
                const char* b = v.data() + dot + 1;
                auto [ptr, ec] = std::from_chars(b, v.data() + v.size(), idx);
                if (ec != std::errc() || ptr != v.data() + v.size())
                    fail(ErrorKind::Syntax, vt, "bad coordinate index");
                const Token et = cur_;
                const int e = integer();
                if (e < 0) fail(ErrorKind::Syntax, et, "negative exponent");
                expect_close();
                if (e > 0) m.emplace_back(Var{v.substr(0, dot), idx}, e);
            }
            expect_close();
            std::sort(m.begin(), m.end());
            Monomial merged;
            for (const auto& [var, e] : m) {
                if (!merged.empty() && merged.back().first == var) {
                    merged.back().second += e;
                } else {
                    merged.emplace_back(var, e);
                }
            }
            p.add_term(std::move(merged), c);
        } while (cur_.kind == Token::Open);
        expect_close();
        return p;
    }

    Lexer lex_;
    Token cur_;
};

void print_block(std::ostringstream& os, const VarBlock& b) {
    os << "(" << b.name;
    if (b.parts.size() == 1 && b.parts.front().name == b.name) {
        os << " " << b.parts.front().dim;
        if (b.radius_sq != 1) os << " (radius2 " << to_string(b.radius_sq) << ")";
    } else {
        if (b.radius_sq != 1) os << " (radius2 " << to_string(b.radius_sq) << ")";
        os << " (parts";
        for (const auto& p : b.parts) os << " (" << p.name << " " << p.dim << ")";
        os << ")";
    }
    os << ")";
}

void print_bool(std::ostringstream& os, const Expr& e, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    os << pad;
    if (e->kind == NodeKind::Atom) {
        os << "(atom " << sign_symbol(e->atom.sign) << " " << print_polynomial(e->atom.poly) << " 0)";
        return;
    }
    os << (e->kind == NodeKind::And ? "(and" : e->kind == NodeKind::Or ? "(or" : "(not");
    for (const auto& c : e->children) {
        os << "\n";
        print_bool(os, c, indent + 2);
    }
    os << ")";
}

}  // namespace

Formula parse_formula(const std::string& text) {
    return Parser(text).sentence();
}

std::string print_polynomial(const Polynomial& p) {
    std::ostringstream os;
    os << "(poly";
    if (p.is_zero()) os << " (mono 0)";
    for (const auto& [m, c] : p.terms()) {
        os << " (mono " << to_string(c);
        for (const auto& [v, e] : m) os << " (" << to_string(v) << " " << e << ")";
        os << ")";
    }
    os << ")";
    return os.str();
}

std::string print_expr(const Expr& e) {
    std::ostringstream os;
    print_bool(os, e, 0);
    return os.str();
}

std::string print_formula(const Formula& f) {
    std::ostringstream os;
    os << "(sentence";
    if (!f.free_blocks().empty()) {
        os << "\n  (free";
        for (const auto& b : f.free_blocks()) {
            os << " ";
            print_block(os, b);
        }
        os << ")";
    }
    if (!f.prefix().empty()) {
        os << "\n  (prefix";
        for (const auto& level : f.prefix()) {
            os << " (" << quantifier_name(level.quantifier);
            if (level.blocks.size() == 1 && level.blocks.front().is_simple()) {
                os << " " << level.blocks.front().name << " " << level.blocks.front().parts.front().dim;
            } else {
                for (const auto& b : level.blocks) {
                    os << " ";
                    print_block(os, b);
                }
            }
            os << ")";
        }
        os << ")";
    }
    os << "\n  (body\n";
    print_bool(os, f.matrix(), 4);
    os << "))\n";
    return os.str();
}

}  // namespace toda
