#include "toda/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace toda {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    const auto dot = text.find('.');
    Rational r;
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        const std::size_t frac_len = text.size() - dot - 1;
        if (frac_len == 0 || digits.empty() || digits == "-" || digits == "+")
            throw std::invalid_argument("bad decimal literal '" + text + "'");
        mpz_class num;
        if (num.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0)
            throw std::invalid_argument("bad decimal literal '" + text + "'");
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
        r = Rational(num, den);
    } else {
        std::string body = text[0] == '+' ? text.substr(1) : text;
        if (body.empty() || r.set_str(body, 10) != 0)
            throw std::invalid_argument("bad rational literal '" + text + "'");
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    }
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) {
    return r.get_str(10);
}

std::string to_string(const Var& v) {
    return v.part + "." + std::to_string(v.index);
}

Polynomial::Polynomial(const Rational& c) {
    if (c != 0) terms_.emplace(Monomial{}, c);
}

Polynomial Polynomial::variable(const Var& v, int power) {
    Polynomial p;
    if (power == 0) return Polynomial(Rational(1));
    p.terms_.emplace(Monomial{{v, power}}, Rational(1));
    return p;
}

Polynomial Polynomial::norm_squared(const std::vector<Var>& coords) {
    Polynomial p;
    for (const auto& v : coords) p.add_term(Monomial{{v, 2}}, Rational(1));
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Polynomial::constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
        int deg = 0;
        for (const auto& [v, e] : m) deg += e;
        d = std::max(d, deg);
    }
    return d;
}

std::set<Var> Polynomial::variables() const {
    std::set<Var> out;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m) out.insert(v);
    return out;
}

int Polynomial::partial_degree(const Monomial& m, const std::function<bool(const Var&)>& in_block) {
    int d = 0;
    for (const auto& [v, e] : m)
        if (in_block(v)) d += e;
    return d;
}

void Polynomial::add_term(Monomial m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial p = *this;
    for (auto& [m, c] : p.terms_) c = -c;
    return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coeff] : terms_) coeff *= c;
    return *this;
}

namespace {

Monomial multiply(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() || j != b.end()) {
        if (j == b.end() || (i != a.end() && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == a.end() || j->first < i->first) {
            out.push_back(*j++);
        } else {
            out.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial p;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) p.add_term(multiply(ma, mb), ca * cb);
    return p;
}

Polynomial Polynomial::pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative polynomial power");
    Polynomial result(Rational(1));
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

Polynomial Polynomial::substitute(const std::map<Var, Polynomial>& values) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
        Monomial kept;
        Polynomial factor(c);
        for (const auto& [v, e] : m) {
            auto it = values.find(v);
            if (it == values.end()) {
                kept.emplace_back(v, e);
            } else {
                factor = factor * it->second.pow(e);
            }
        }
        Polynomial rest;
        rest.terms_.emplace(std::move(kept), Rational(1));
        out += factor * rest;
    }
    return out;
}

Polynomial Polynomial::rename(const std::function<Var(const Var&)>& f) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
        Monomial renamed;
        renamed.reserve(m.size());
        for (const auto& [v, e] : m) renamed.emplace_back(f(v), e);
        std::sort(renamed.begin(), renamed.end());
        out.add_term(std::move(renamed), c);
    }
    return out;
}

std::map<int, Polynomial> Polynomial::homogeneous_components(
    const std::function<bool(const Var&)>& in_block) const {
    std::map<int, Polynomial> out;
    for (const auto& [m, c] : terms_) out[partial_degree(m, in_block)].add_term(m, c);
    return out;
}

std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        if (!first) os << " + ";
        first = false;
        os << to_string(c);
        for (const auto& [v, e] : m) {
            os << "*" << to_string(v);
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

}  // namespace toda
