// Poincare polynomials and the coefficient maps applied to them.

#pragma once

#include <set>
#include <string>
#include <vector>

namespace toda {

class PoincarePolynomial {
public:
    PoincarePolynomial() = default;
    /// Throws std::domain_error on a negative coefficient.
    explicit PoincarePolynomial(std::vector<long long> coeffs);

    const std::vector<long long>& coeffs() const { return coeffs_; }
    long long operator[](int i) const;
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool operator==(const PoincarePolynomial&) const = default;

private:
    std::vector<long long> coeffs_;
};

/// "1 + T + 3T^5", "0" for the zero polynomial.
std::string to_string(const PoincarePolynomial& p);

enum class StageKind { Identity, Truncate, Duality };
/// ClosedK: the input describes the complement of the compact set K and the
/// output describes K.  OpenK: the input describes K and the output its
/// (open) complement.
enum class DualDirection { ClosedK, OpenK };

struct CoeffStage {
    StageKind kind = StageKind::Identity;
    int n = 0;
    DualDirection direction = DualDirection::ClosedK;

    static CoeffStage identity() { return {}; }
    static CoeffStage truncate(int m) { return {StageKind::Truncate, m, DualDirection::ClosedK}; }
    static CoeffStage duality(int n, DualDirection d) { return {StageKind::Duality, n, d}; }
    bool operator==(const CoeffStage&) const = default;
};

std::string to_string(const CoeffStage& s);

PoincarePolynomial truncate(const PoincarePolynomial& p, int m);

/// Betti numbers of a subset of S^n from those of its complement (or back).
/// Throws std::domain_error when the input cannot come from a subset of S^n.
PoincarePolynomial dual_betti(const PoincarePolynomial& p, int n, DualDirection direction);

/// A duality stage reads only degrees 0..n of its input.
PoincarePolynomial apply_stage(const CoeffStage& s, const PoincarePolynomial& p);
/// Stages are applied in list order.
PoincarePolynomial apply_chain(const std::vector<CoeffStage>& chain, const PoincarePolynomial& p);

/// Input degrees that determine the given output degrees of a stage.
std::set<int> needed_input_degrees(const CoeffStage& s, const std::set<int>& out);
std::set<int> needed_input_degrees(const std::vector<CoeffStage>& chain, const std::set<int>& out);

}  // namespace toda
