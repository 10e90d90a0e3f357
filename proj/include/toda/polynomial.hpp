// Sparse multivariate polynomials with exact rational coefficients.
//
// Variables are block coordinates `part.index`.  Monomials are stored as
// exponent lists sorted by variable, so the term map is canonical: two
// polynomials are equal iff their term maps are equal.

#pragma once

#include <compare>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace toda {

using Rational = mpq_class;

/// n/d in canonical form (mpq_class(n, d) alone does not reduce).
inline Rational make_rational(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

/// Parses "-3/4", "7" or "0.125" into a canonical rational.
Rational parse_rational(const std::string& text);
/// Canonical text: "p" or "p/q" with q > 1.
std::string to_string(const Rational& r);

struct Var {
    std::string part;
    int index = 0;

    auto operator<=>(const Var&) const = default;
    bool operator==(const Var&) const = default;
};

std::string to_string(const Var& v);

using Monomial = std::vector<std::pair<Var, int>>;

class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational>;

    Polynomial() = default;
    explicit Polynomial(const Rational& c);

    static Polynomial constant(const Rational& c) { return Polynomial(c); }
    static Polynomial variable(const Var& v, int power = 1);
    /// Sum of squares of the given coordinates.
    static Polynomial norm_squared(const std::vector<Var>& coords);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    int total_degree() const;
    std::size_t term_count() const { return terms_.size(); }
    std::set<Var> variables() const;

    /// Degree of a monomial restricted to variables accepted by `in_block`.
    static int partial_degree(const Monomial& m, const std::function<bool(const Var&)>& in_block);

    /// Adds c * m, removing the term if it cancels.
    void add_term(Monomial m, const Rational& c);

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    Polynomial pow(int e) const;

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

    /// Replaces variables by polynomials; variables absent from `values` stay.
    Polynomial substitute(const std::map<Var, Polynomial>& values) const;
    /// Renames variables through `f` (must be injective on this polynomial).
    Polynomial rename(const std::function<Var(const Var&)>& f) const;

    /// Splits into homogeneous components w.r.t. the variables in `in_block`.
    std::map<int, Polynomial> homogeneous_components(const std::function<bool(const Var&)>& in_block) const;

    template <class T, class Lookup>
    T evaluate(const Lookup& value_of) const {
        T acc{0};
        for (const auto& [mono, coeff] : terms_) {
            T term = coeff_as<T>(coeff);
            for (const auto& [v, e] : mono) {
                const T x = value_of(v);
                for (int k = 0; k < e; ++k) term *= x;
            }
            acc += term;
        }
        return acc;
    }

private:
    template <class T>
    static T coeff_as(const Rational& c) {
        if constexpr (std::is_same_v<T, Rational>) {
            return c;
        } else {
            return static_cast<T>(c.get_d());
        }
    }

    TermMap terms_;
};

std::string to_string(const Polynomial& p);

}  // namespace toda
