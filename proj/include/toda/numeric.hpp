// Binary64 evaluation of quantifier-free formulas and projection of points
// onto the set they define.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "toda/formula.hpp"

namespace toda {

class CompiledPoly {
public:
    CompiledPoly() = default;
    /// `slot` maps a variable to its coordinate index.
    CompiledPoly(const Polynomial& p, const std::function<int(const Var&)>& slot);

    double value(const double* x) const;
    /// Value; the gradient is accumulated into `grad` scaled by `scale`.
    double value_and_grad(const double* x, double* grad, double scale = 1.0) const;
    /// Variables the polynomial depends on.
    const std::vector<int>& support() const { return support_; }

private:
    struct Term {
        double coeff;
        std::vector<std::pair<int, int>> factors;  // (slot, exponent)
    };
    std::vector<Term> terms_;
    std::vector<int> support_;
};

struct Residual {
    double value = 0;
    std::vector<std::pair<int, double>> grad;  // sparse gradient
};

/// Matrix of a quantifier-free formula in negation normal form, with each
/// free block occupying a contiguous coordinate range (block order).
class CompiledFormula {
public:
    /// `sphere_constraints` adds |B|^2 = rho for every free block.
    explicit CompiledFormula(const Formula& f, bool sphere_constraints = true);

    int dim() const { return dim_; }
    const std::vector<VarBlock>& blocks() const { return blocks_; }
    const std::vector<int>& offsets() const { return offsets_; }
    bool sphere_constraints() const { return spheres_; }

    /// Same semantics as eval_formula with a tolerance, sphere constraints
    /// checked with `sphere_tol`.
    bool holds(const double* x, double tol, double sphere_tol) const;
    /// Brute-force reading: every atom shifted by `delta` towards (strict) or
    /// away from (lenient) satisfaction; equalities are the slab |q| <= delta.
    bool holds_with_margin(const double* x, double delta, bool strict) const;

    /// Cell-cover reading: equality atoms (and sphere constraints) hold when
    /// |q| <= eps * |grad q|, other atoms are evaluated exactly.
    bool holds_inflated(const double* x, double eps) const;

    /// Sum of squared residuals.  Strict atoms aim for a margin `eta`.
    double violation(const double* x, double eta) const;
    void residuals(const double* x, double eta, std::vector<Residual>& out) const;

    /// Levenberg-Marquardt descent of the violation from x (in place).
    /// Returns the final violation.
    double project(std::vector<double>& x, double eta, int max_iterations) const;

    /// Uniform random point on the block spheres.
    std::vector<double> random_sphere_point(std::mt19937_64& rng) const;

    std::size_t atom_count() const { return atoms_.size(); }

private:
    struct AtomData {
        CompiledPoly poly;
        Sign sign;
    };
    struct NodeData {
        NodeKind kind;
        int atom = -1;
        std::vector<int> children;
    };

    int compile(const Expr& e);
    bool holds_node(int n, const std::vector<double>& q, double tol) const;
    bool inflated_node(int n, const double* x, const std::vector<double>& q, double eps) const;
    bool margin_node(int n, const std::vector<double>& q, double delta, bool strict) const;
    double violation_node(int n, const std::vector<double>& q, double eta) const;
    void residual_node(int n, const double* x, const std::vector<double>& q, double eta,
                       std::vector<Residual>& out) const;
    void atom_values(const double* x, std::vector<double>& q) const;

    std::vector<VarBlock> blocks_;
    std::vector<int> offsets_;
    std::vector<double> radius_sq_;
    std::map<std::string, int> part_offset_;
    int dim_ = 0;
    bool spheres_ = true;
    std::vector<AtomData> atoms_;
    std::vector<NodeData> nodes_;
    int root_ = -1;
};

}  // namespace toda
