#include "ncpi/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "ncpi/errors.hpp"
#include "ncpi/rng.hpp"

namespace ncpi {

namespace {

constexpr std::size_t kMaxExprLength = 1 << 20;

struct Token {
    enum class Kind { Name, Number, Plus, Minus, Star, Caret, Prime, LParen, RParen, End };
    Kind kind;
    std::string text;
    double value = 0.0;
    bool imaginary = false;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    Token next() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        const std::size_t pos = i_;
        if (i_ >= s_.size()) return {Token::Kind::End, "", 0.0, false, pos};
        const char c = s_[i_];
        switch (c) {
            case '+': ++i_; return {Token::Kind::Plus, "+", 0.0, false, pos};
            case '-': ++i_; return {Token::Kind::Minus, "-", 0.0, false, pos};
            case '*': ++i_; return {Token::Kind::Star, "*", 0.0, false, pos};
            case '^': ++i_; return {Token::Kind::Caret, "^", 0.0, false, pos};
            case '\'': ++i_; return {Token::Kind::Prime, "'", 0.0, false, pos};
            case '(': ++i_; return {Token::Kind::LParen, "(", 0.0, false, pos};
            case ')': ++i_; return {Token::Kind::RParen, ")", 0.0, false, pos};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(pos);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_name(pos);
        throw parse_error("syntax error at position " + std::to_string(pos) + ": unexpected character '" +
                          std::string(1, c) + "'");
    }

private:
    Token lex_number(std::size_t pos) {
        std::size_t j = i_;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
        if (j < s_.size() && s_[j] == '.') {
            ++j;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
        }
        if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
            std::size_t k = j + 1;
            if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
            if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
                while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
                j = k;
            }
        }
        const std::string text(s_.substr(i_, j - i_));
        double value = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
        if (res.ec != std::errc())
            throw parse_error("syntax error at position " + std::to_string(pos) + ": bad number '" + text + "'");
        bool imag = false;
        if (j < s_.size() && s_[j] == 'i') {
            // Imaginary suffix only when not followed by more name characters.
            const bool more = j + 1 < s_.size() &&
                              (std::isalnum(static_cast<unsigned char>(s_[j + 1])) || s_[j + 1] == '_');
            if (!more) {
                imag = true;
                ++j;
            }
        }
        i_ = j;
        return {Token::Kind::Number, text, value, imag, pos};
    }

    Token lex_name(std::size_t pos) {
        std::size_t j = i_;
        while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
        Token t{Token::Kind::Name, std::string(s_.substr(i_, j - i_)), 0.0, false, pos};
        i_ = j;
        return t;
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

class Parser {
public:
    explicit Parser(std::string_view s) : lex_(s) { advance(); }

    std::unique_ptr<ExprAST> run() {
        auto e = expr();
        expect(Token::Kind::End, "end of input");
        return e;
    }

private:
    void advance() { tok_ = lex_.next(); }

    void expect(Token::Kind k, const char* what) {
        if (tok_.kind != k)
            throw parse_error("syntax error at position " + std::to_string(tok_.pos) + ": expected " + what);
    }

    static std::unique_ptr<ExprAST> node(ExprAST::Kind k) {
        auto n = std::make_unique<ExprAST>();
        n->kind = k;
        return n;
    }

    std::unique_ptr<ExprAST> expr() {
        std::unique_ptr<ExprAST> acc;
        if (tok_.kind == Token::Kind::Minus) {
            advance();
            acc = node(ExprAST::Kind::Neg);
            acc->child.push_back(term());
        } else {
            acc = term();
        }
        while (tok_.kind == Token::Kind::Plus || tok_.kind == Token::Kind::Minus) {
            const bool plus = tok_.kind == Token::Kind::Plus;
            advance();
            auto n = node(plus ? ExprAST::Kind::Add : ExprAST::Kind::Sub);
            n->child.push_back(std::move(acc));
            n->child.push_back(term());
            acc = std::move(n);
        }
        return acc;
    }

    std::unique_ptr<ExprAST> term() {
        auto acc = factor();
        while (tok_.kind == Token::Kind::Star) {
            advance();
            auto n = node(ExprAST::Kind::Mul);
            n->child.push_back(std::move(acc));
            n->child.push_back(factor());
            acc = std::move(n);
        }
        return acc;
    }

    std::unique_ptr<ExprAST> factor() {
        auto base = atom();
        if (tok_.kind == Token::Kind::Caret) {
            advance();
            if (tok_.kind != Token::Kind::Number || tok_.imaginary || tok_.value < 0.0 ||
                tok_.value != std::floor(tok_.value))
                throw parse_error("syntax error at position " + std::to_string(tok_.pos) +
                                  ": exponent must be a nonnegative integer");
            auto n = node(ExprAST::Kind::Pow);
            n->exponent = static_cast<unsigned>(tok_.value);
            n->child.push_back(std::move(base));
            base = std::move(n);
            advance();
        }
        if (tok_.kind == Token::Kind::Prime) {
            advance();
            auto n = node(ExprAST::Kind::Adjoint);
            n->child.push_back(std::move(base));
            base = std::move(n);
        }
        return base;
    }

    std::unique_ptr<ExprAST> atom() {
        switch (tok_.kind) {
            case Token::Kind::Number: {
                auto n = node(ExprAST::Kind::Scalar);
                n->scalar = tok_.imaginary ? Cplx(0.0, tok_.value) : Cplx(tok_.value, 0.0);
                advance();
                return n;
            }
            case Token::Kind::Name: {
                if (tok_.text == "X" || tok_.text == "t") {
                    advance();
                    return node(ExprAST::Kind::Indeterminate);
                }
                if (tok_.text == "i")
                    throw parse_error("syntax error at position " + std::to_string(tok_.pos) +
                                      ": 'i' is reserved; write imaginary literals as '1i'");
                auto n = node(ExprAST::Kind::Coeff);
                n->name = tok_.text;
                advance();
                return n;
            }
            case Token::Kind::LParen: {
                advance();
                auto e = expr();
                expect(Token::Kind::RParen, "')'");
                advance();
                return e;
            }
            default:
                throw parse_error("syntax error at position " + std::to_string(tok_.pos) +
                                  ": expected 'X', a name, a number, or '('");
        }
    }

    Lexer lex_;
    Token tok_;
};

CMat materialize_coefficient(const CoeffAlgebra& alg, const std::string& name) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    Rng rng(h);
    const int n = alg.ambient_dim();
    CMat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.cnormal();
    CMat b = alg.expectation(g);  // project into B
    const double nrm = operator_norm(b);
    if (nrm > 1e-12) b /= nrm;
    else b = alg.identity();
    return b;
}

std::optional<int> basis_ref(const std::string& name) {
    if (name.size() < 2 || name[0] != 'e') return std::nullopt;
    for (std::size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    return std::atoi(name.c_str() + 1);
}

// --- printing helpers ---

std::string format_real(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// Real weights print bare; complex ones as "(re+imi)", both within the grammar.
std::string format_weight(Cplx w) {
    if (w.imag() == 0.0) return format_real(w.real());
    std::string out = "(" + format_real(w.real());
    out += w.imag() < 0.0 ? "-" : "+";
    out += format_real(std::abs(w.imag()));
    out += "i)";
    return out;
}

std::string word_string(const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.idx.size(); ++i) {
        if (i) out += "*X*";
        out += "e" + std::to_string(w.idx[i]);
    }
    return out;
}

// Joins formatted (weight, body) terms, folding negative real weights into
// " - " separators.
std::string join_terms(const std::vector<std::pair<Cplx, std::string>>& parts) {
    if (parts.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, body] : parts) {
        Cplx weight = w;
        if (!first) {
            if (weight.imag() == 0.0 && weight.real() < 0.0) {
                out += " - ";
                weight = -weight;
            } else {
                out += " + ";
            }
        }
        first = false;
        if (body.empty())
            out += format_weight(weight);
        else if (weight == Cplx(1.0, 0.0))
            out += body;
        else
            out += format_weight(weight) + "*" + body;
    }
    return out;
}

// Stored word via labels; nullopt when some coefficient is unlabeled.
std::optional<std::string> labeled_word(const Monomial& m) {
    std::string out;
    bool wrote = false;
    for (int i = 0; i <= m.degree(); ++i) {
        const std::string& lbl = m.label(i);
        if (lbl.empty()) return std::nullopt;
        if (i > 0) {
            if (wrote) out += "*";
            out += "X";
            wrote = true;
        }
        if (lbl != "1") {
            if (wrote) out += "*";
            out += lbl;
            wrote = true;
        }
    }
    return out;  // empty string = unit monomial
}

}  // namespace

std::unique_ptr<ExprAST> parse_expr_text(std::string_view text) {
    if (text.size() > kMaxExprLength) throw parse_error("expression exceeds the length cap");
    return Parser(text).run();
}

NCPoly lower(const ExprAST& ast, ModelContext& ctx) {
    const AlgebraPtr& alg = ctx.algebra;
    switch (ast.kind) {
        case ExprAST::Kind::Indeterminate:
            return NCPoly::indeterminate(alg);
        case ExprAST::Kind::Scalar:
            return NCPoly::scalar(alg, ast.scalar);
        case ExprAST::Kind::Coeff: {
            if (const auto k = basis_ref(ast.name)) {
                if (*k >= alg->dim())
                    throw parse_error("unknown coefficient name '" + ast.name + "': basis has dimension " +
                                      std::to_string(alg->dim()));
                return NCPoly::coefficient(alg, alg->basis_elem(*k), ast.name);
            }
            auto it = ctx.coeff_table.find(ast.name);
            if (it == ctx.coeff_table.end()) {
                if (!ctx.materialize_unknown)
                    throw parse_error("unknown coefficient name '" + ast.name + "'");
                it = ctx.coeff_table.emplace(ast.name, materialize_coefficient(*alg, ast.name)).first;
            }
            return NCPoly::coefficient(alg, it->second, ast.name);
        }
        case ExprAST::Kind::Add:
            return lower(*ast.child[0], ctx).add(lower(*ast.child[1], ctx));
        case ExprAST::Kind::Sub:
            return lower(*ast.child[0], ctx).sub(lower(*ast.child[1], ctx));
        case ExprAST::Kind::Neg:
            return lower(*ast.child[0], ctx).scale(Cplx(-1, 0));
        case ExprAST::Kind::Mul:
            return lower(*ast.child[0], ctx).mul(lower(*ast.child[1], ctx));
        case ExprAST::Kind::Pow: {
            const NCPoly base = lower(*ast.child[0], ctx);
            const long long projected = static_cast<long long>(base.max_degree()) * ast.exponent;
            if (projected > alg->limits().degree_cap)
                throw parse_error("power too large: degree " + std::to_string(projected) +
                                  " exceeds the degree cap " + std::to_string(alg->limits().degree_cap));
            return base.pow(ast.exponent);
        }
        case ExprAST::Kind::Adjoint:
            return lower(*ast.child[0], ctx).adjoint();
    }
    throw parse_error("internal: unhandled expression node");
}

NCPoly parse_poly(std::string_view text, ModelContext& ctx) {
    const auto ast = parse_expr_text(text);
    return lower(*ast, ctx);
}

std::string print_canonical(const NCPoly& p) {
    std::vector<std::pair<Cplx, std::string>> parts;
    for (const auto& [w, c] : p.canonical()) parts.emplace_back(c, word_string(w));
    return join_terms(parts);
}

std::string print_canonical(const TensorElem& u) {
    std::vector<std::pair<Cplx, std::string>> parts;
    for (const auto& [wp, c] : u.canonical())
        parts.emplace_back(c, word_string(wp.first) + " \xE2\x8A\x97 " + word_string(wp.second));
    return join_terms(parts);
}

std::string print_stored(const NCPoly& p) {
    std::vector<std::pair<Cplx, std::string>> parts;
    for (const auto& t : p.terms()) {
        const auto body = labeled_word(t.mono);
        if (!body) return print_canonical(p);
        parts.emplace_back(t.weight, *body);
    }
    return join_terms(parts);
}

std::string print_stored(const TensorElem& u) {
    std::vector<std::pair<Cplx, std::string>> parts;
    for (const auto& t : u.terms()) {
        const auto l = labeled_word(t.left);
        const auto r = labeled_word(t.right);
        if (!l || !r) return print_canonical(u);
        const std::string ls = l->empty() ? "1" : *l;
        const std::string rs = r->empty() ? "1" : *r;
        parts.emplace_back(t.weight, ls + " \xE2\x8A\x97 " + rs);
    }
    return join_terms(parts);
}

}  // namespace ncpi
