#include "toda/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>

namespace toda {

CompiledPoly::CompiledPoly(const Polynomial& p, const std::function<int(const Var&)>& slot) {
    std::set<int> support;
    for (const auto& [m, c] : p.terms()) {
        Term t{c.get_d(), {}};
        for (const auto& [v, e] : m) {
            const int s = slot(v);
            t.factors.emplace_back(s, e);
            support.insert(s);
        }
        terms_.push_back(std::move(t));
    }
    support_.assign(support.begin(), support.end());
}

double CompiledPoly::value(const double* x) const {
    double acc = 0;
    for (const auto& t : terms_) {
        double v = t.coeff;
        for (const auto& [s, e] : t.factors) {
            const double xs = x[s];
            for (int k = 0; k < e; ++k) v *= xs;
        }
        acc += v;
    }
    return acc;
}

double CompiledPoly::value_and_grad(const double* x, double* grad, double scale) const {
    double acc = 0;
    for (const auto& t : terms_) {
        double v = t.coeff;
        for (const auto& [s, e] : t.factors) {
            const double xs = x[s];
            for (int k = 0; k < e; ++k) v *= xs;
        }
        acc += v;
        for (std::size_t i = 0; i < t.factors.size(); ++i) {
            double d = t.coeff * scale;
            for (std::size_t j = 0; j < t.factors.size(); ++j) {
                const auto [s, e] = t.factors[j];
                const int power = i == j ? e - 1 : e;
                if (i == j) d *= e;
                for (int k = 0; k < power; ++k) d *= x[s];
            }
            grad[t.factors[i].first] += d;
        }
    }
    return acc;
}

CompiledFormula::CompiledFormula(const Formula& f, bool sphere_constraints) : spheres_(sphere_constraints) {
    if (!f.is_quantifier_free()) throw FormulaError(ErrorKind::Syntax, "numeric evaluation needs a quantifier-free formula");
    blocks_ = f.free_blocks();
    for (const auto& b : blocks_) {
        offsets_.push_back(dim_);
        dim_ += b.coord_count();
        radius_sq_.push_back(b.radius_sq.get_d());
    }
    const auto layout = part_layout(blocks_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        for (const auto& [part, where] : layout)
            if (where.first == blocks_[i].name) part_offset_[part] = offsets_[i] + where.second;
    }
    root_ = compile(nnf(f.matrix()));
}

int CompiledFormula::compile(const Expr& e) {
    NodeData n;
    n.kind = e->kind;
    if (e->kind == NodeKind::Atom) {
        auto slot = [&](const Var& v) {
            auto it = part_offset_.find(v.part);
            if (it == part_offset_.end())
                throw FormulaError(ErrorKind::UnknownVariable, "variable '" + to_string(v) + "' is not free");
            return it->second + v.index;
        };
        atoms_.push_back(AtomData{CompiledPoly(e->atom.poly, slot), e->atom.sign});
        n.atom = static_cast<int>(atoms_.size()) - 1;
    } else {
        for (const auto& c : e->children) n.children.push_back(compile(c));
    }
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

void CompiledFormula::atom_values(const double* x, std::vector<double>& q) const {
    q.resize(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) q[i] = atoms_[i].poly.value(x);
}

namespace {

bool atom_holds(Sign s, double q, double tol) {
    switch (s) {
        case Sign::Eq: return std::abs(q) <= tol;
        case Sign::Ne: return std::abs(q) > tol;
        case Sign::Ge: return q >= -tol;
        case Sign::Lt: return q < -tol;
        case Sign::Gt: return q > tol;
        case Sign::Le: return q <= tol;
    }
    return false;
}

}  // namespace

bool CompiledFormula::holds_node(int n, const std::vector<double>& q, double tol) const {
    const NodeData& d = nodes_[n];
    switch (d.kind) {
        case NodeKind::Atom: return atom_holds(atoms_[d.atom].sign, q[d.atom], tol);
        case NodeKind::Not: return !holds_node(d.children[0], q, tol);
        case NodeKind::And:
            for (int c : d.children)
                if (!holds_node(c, q, tol)) return false;
            return true;
        case NodeKind::Or:
            for (int c : d.children)
                if (holds_node(c, q, tol)) return true;
            return false;
    }
    return false;
}

bool CompiledFormula::holds(const double* x, double tol, double sphere_tol) const {
    if (spheres_) {
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            double s = 0;
            for (int i = 0; i < blocks_[b].coord_count(); ++i) s += x[offsets_[b] + i] * x[offsets_[b] + i];
            if (std::abs(s - radius_sq_[b]) > sphere_tol) return false;
        }
    }
    std::vector<double> q;
    atom_values(x, q);
    return holds_node(root_, q, tol);
}

namespace {

bool within_slab(double q, double grad_norm, double eps) {
    return std::abs(q) <= eps * grad_norm;
}

}  // namespace

bool CompiledFormula::inflated_node(int n, const double* x, const std::vector<double>& q, double eps) const {
    const NodeData& d = nodes_[n];
    switch (d.kind) {
        case NodeKind::Atom: {
            const AtomData& a = atoms_[d.atom];
            if (a.sign != Sign::Eq && a.sign != Sign::Ne) return atom_holds(a.sign, q[d.atom], 0.0);
            std::vector<double> g(static_cast<std::size_t>(dim_), 0.0);
            a.poly.value_and_grad(x, g.data());
            double gn = 0;
            for (int s : a.poly.support()) gn += g[s] * g[s];
            const bool on = within_slab(q[d.atom], std::sqrt(gn), eps);
            return a.sign == Sign::Eq ? on : !on;
        }
        case NodeKind::Not: return !inflated_node(d.children[0], x, q, eps);
        case NodeKind::And:
            for (int c : d.children)
                if (!inflated_node(c, x, q, eps)) return false;
            return true;
        case NodeKind::Or:
            for (int c : d.children)
                if (inflated_node(c, x, q, eps)) return true;
            return false;
    }
    return false;
}

bool CompiledFormula::holds_inflated(const double* x, double eps) const {
    if (spheres_) {
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            double s = 0;
            for (int i = 0; i < blocks_[b].coord_count(); ++i) s += x[offsets_[b] + i] * x[offsets_[b] + i];
            if (!within_slab(s - radius_sq_[b], 2 * std::sqrt(s), eps)) return false;
        }
    }
    std::vector<double> q;
    atom_values(x, q);
    return inflated_node(root_, x, q, eps);
}

bool CompiledFormula::margin_node(int n, const std::vector<double>& q, double delta, bool strict) const {
    const NodeData& d = nodes_[n];
    switch (d.kind) {
        case NodeKind::Atom: {
            const double v = q[d.atom];
            const double m = strict ? delta : -delta;
            switch (atoms_[d.atom].sign) {
                case Sign::Eq: return std::abs(v) <= delta;
                case Sign::Ne: return std::abs(v) > delta;
                case Sign::Ge: return v >= m;
                case Sign::Gt: return v > m;
                case Sign::Le: return v <= -m;
                case Sign::Lt: return v < -m;
            }
            return false;
        }
        case NodeKind::Not: return !margin_node(d.children[0], q, delta, !strict);
        case NodeKind::And:
            for (int c : d.children)
                if (!margin_node(c, q, delta, strict)) return false;
            return true;
        case NodeKind::Or:
            for (int c : d.children)
                if (margin_node(c, q, delta, strict)) return true;
            return false;
    }
    return false;
}

bool CompiledFormula::holds_with_margin(const double* x, double delta, bool strict) const {
    std::vector<double> q;
    atom_values(x, q);
    return margin_node(root_, q, delta, strict);
}

namespace {

// Residual of one atom; 0 when satisfied.
double atom_residual(Sign s, double q, double eta) {
    switch (s) {
        case Sign::Eq: return q;
        case Sign::Ge: return q < 0 ? q : 0;
        case Sign::Le: return q > 0 ? q : 0;
        case Sign::Gt: return q < eta ? q - eta : 0;
        case Sign::Lt: return q > -eta ? q + eta : 0;
        case Sign::Ne:
            if (std::abs(q) >= eta) return 0;
            return q >= 0 ? q - eta : q + eta;
    }
    return 0;
}

}  // namespace

double CompiledFormula::violation_node(int n, const std::vector<double>& q, double eta) const {
    const NodeData& d = nodes_[n];
    switch (d.kind) {
        case NodeKind::Atom: {
            const double r = atom_residual(atoms_[d.atom].sign, q[d.atom], eta);
            return r * r;
        }
        case NodeKind::And: {
            double s = 0;
            for (int c : d.children) s += violation_node(c, q, eta);
            return s;
        }
        case NodeKind::Or: {
            double best = std::numeric_limits<double>::infinity();
            for (int c : d.children) best = std::min(best, violation_node(c, q, eta));
            return best;
        }
        case NodeKind::Not: break;
    }
    throw FormulaError(ErrorKind::Syntax, "negation left after normal form");
}

double CompiledFormula::violation(const double* x, double eta) const {
    double v = 0;
    if (spheres_) {
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            double s = 0;
            for (int i = 0; i < blocks_[b].coord_count(); ++i) s += x[offsets_[b] + i] * x[offsets_[b] + i];
            v += (s - radius_sq_[b]) * (s - radius_sq_[b]);
        }
    }
    std::vector<double> q;
    atom_values(x, q);
    return v + violation_node(root_, q, eta);
}

void CompiledFormula::residual_node(int n, const double* x, const std::vector<double>& q, double eta,
                                    std::vector<Residual>& out) const {
    const NodeData& d = nodes_[n];
    switch (d.kind) {
        case NodeKind::Atom: {
            const double r = atom_residual(atoms_[d.atom].sign, q[d.atom], eta);
            if (r == 0) return;
            std::vector<double> g(static_cast<std::size_t>(dim_), 0.0);
            atoms_[d.atom].poly.value_and_grad(x, g.data());
            Residual res{r, {}};
            for (int s : atoms_[d.atom].poly.support())
                if (g[s] != 0) res.grad.emplace_back(s, g[s]);
            out.push_back(std::move(res));
            return;
        }
        case NodeKind::And:
            for (int c : d.children) residual_node(c, x, q, eta, out);
            return;
        case NodeKind::Or: {
            int best = -1;
            double best_v = std::numeric_limits<double>::infinity();
            for (int c : d.children) {
                const double v = violation_node(c, q, eta);
                if (v < best_v) {
                    best_v = v;
                    best = c;
                }
            }
            if (best_v > 0) residual_node(best, x, q, eta, out);
            return;
        }
        case NodeKind::Not: break;
    }
    throw FormulaError(ErrorKind::Syntax, "negation left after normal form");
}

void CompiledFormula::residuals(const double* x, double eta, std::vector<Residual>& out) const {
    out.clear();
    if (spheres_) {
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            Residual r;
            double s = 0;
            for (int i = 0; i < blocks_[b].coord_count(); ++i) {
                const int k = offsets_[b] + i;
                s += x[k] * x[k];
                r.grad.emplace_back(k, 2 * x[k]);
            }
            r.value = s - radius_sq_[b];
            if (r.value != 0) out.push_back(std::move(r));
        }
    }
    std::vector<double> q;
    atom_values(x, q);
    residual_node(root_, x, q, eta, out);
}

double CompiledFormula::project(std::vector<double>& x, double eta, int max_iterations) const {
    const int n = dim_;
    double lambda = 1e-3;
    double current = violation(x.data(), eta);
    std::vector<Residual> res;
    std::vector<double> trial(x.size());
    for (int it = 0; it < max_iterations && current > 1e-26; ++it) {
        residuals(x.data(), eta, res);
        if (res.empty()) break;
        Eigen::MatrixXd JtJ = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd Jtr = Eigen::VectorXd::Zero(n);
        for (const auto& r : res) {
            for (const auto& [i, gi] : r.grad) {
                Jtr(i) += gi * r.value;
                for (const auto& [j, gj] : r.grad) JtJ(i, j) += gi * gj;
            }
        }
        bool improved = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            Eigen::MatrixXd A = JtJ;
            for (int i = 0; i < n; ++i) A(i, i) += lambda * (1.0 + JtJ(i, i));
            const Eigen::VectorXd step = A.ldlt().solve(-Jtr);
            for (int i = 0; i < n; ++i) trial[i] = x[i] + step(i);
            const double v = violation(trial.data(), eta);
            if (std::isfinite(v) && v < current) {
                x = trial;
                current = v;
                lambda = std::max(lambda / 3.0, 1e-12);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!improved) break;
    }
    return current;
}

std::vector<double> CompiledFormula::random_sphere_point(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(dim_));
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const int k = blocks_[b].coord_count();
        double s = 0;
        for (int i = 0; i < k; ++i) {
            x[offsets_[b] + i] = normal(rng);
            s += x[offsets_[b] + i] * x[offsets_[b] + i];
        }
        const double scale = std::sqrt(radius_sq_[b] / std::max(s, 1e-300));
        for (int i = 0; i < k; ++i) x[offsets_[b] + i] *= scale;
    }
    return x;
}

}  // namespace toda
