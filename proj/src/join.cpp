#include "toda/join.hpp"

#include <algorithm>
#include <set>

namespace toda {

std::string copy_name(const std::string& name, const std::string& tag, int i) {
    return name + "#" + tag + "#" + std::to_string(i);
}

std::string t_part_name(const std::string& tag) { return "T#" + tag; }
std::string u_part_name(const std::string& tag) { return "U#" + tag; }
std::string fiber_block_name(const std::string& tag) { return "V#" + tag; }

namespace {

Rational rho_sum(const std::vector<VarBlock>& blocks) {
    Rational s = 0;
    for (const auto& b : blocks) s += b.radius_sq;
    return s;
}

int coord_sum(const std::vector<VarBlock>& blocks) {
    int n = 0;
    for (const auto& b : blocks) n += b.coord_count();
    return n;
}

VarBlock copy_block(const VarBlock& b, const std::string& tag, int i) {
    VarBlock c;
    c.name = copy_name(b.name, tag, i);
    c.radius_sq = b.radius_sq;
    for (const auto& p : b.parts) c.parts.push_back(Part{copy_name(p.name, tag, i), p.dim});
    return c;
}

Polynomial var(const std::string& part, int i) { return Polynomial::variable(Var{part, i}); }

Expr atom(Polynomial p, Sign s) { return make_atom(std::move(p), s); }

}  // namespace

Rational join_sphere_constant(const JoinSpec& spec) {
    const Rational outer = spec.param.radius_sq + rho_sum(spec.carried);
    const Rational inner = Rational(spec.p + 1) * rho_sum(spec.joined);
    if (spec.variant == JoinVariant::Closed) return outer + inner + 2;
    return 2 * (outer + inner);
}

int join_N(const JoinSpec& spec) {
    return spec.param.coord_count() + coord_sum(spec.carried) + (spec.p + 1) * (coord_sum(spec.joined) + 1);
}

VarBlock join_fiber_block(const JoinSpec& spec) {
    VarBlock v;
    v.name = fiber_block_name(spec.tag);
    for (const auto& c : spec.carried) v.parts.insert(v.parts.end(), c.parts.begin(), c.parts.end());
    for (int i = 0; i <= spec.p; ++i)
        for (const auto& b : spec.joined) {
            const VarBlock c = copy_block(b, spec.tag, i);
            v.parts.insert(v.parts.end(), c.parts.begin(), c.parts.end());
        }
    v.parts.push_back(Part{t_part_name(spec.tag), spec.p});
    v.parts.push_back(Part{u_part_name(spec.tag), 0});
    v.radius_sq = join_sphere_constant(spec) - spec.param.radius_sq;
    return v;
}

namespace {

// Sign conditions for A + wB with w = sqrt(s) > 0.
Expr positive(const Polynomial& A, const Polynomial& B, const Polynomial& s) {
    const Polynomial diff = A * A - s * B * B;
    return make_or({
        make_and({atom(A, Sign::Gt), atom(B, Sign::Gt)}),
        make_and({atom(A, Sign::Gt), atom(diff, Sign::Gt)}),
        make_and({atom(B, Sign::Gt), atom(-diff, Sign::Gt)}),
    });
}

Expr radical_sign(const Polynomial& A, const Polynomial& B, const Polynomial& s, Sign sign) {
    switch (sign) {
        case Sign::Gt: return positive(A, B, s);
        case Sign::Lt: return positive(-A, -B, s);
        case Sign::Ne: return make_or({positive(A, B, s), positive(-A, -B, s)});
        case Sign::Le: return nnf(positive(A, B, s), true);
        case Sign::Ge: return nnf(positive(-A, -B, s), true);
        case Sign::Eq: return nnf(make_or({positive(A, B, s), positive(-A, -B, s)}), true);
    }
    return nullptr;
}

Expr normalize_one(const Atom& a, const VarBlock& block) {
    std::set<std::string> parts;
    for (const auto& p : block.parts) parts.insert(p.name);
    auto in_block = [&](const Var& v) { return parts.count(v.part) > 0; };
    const auto comps = a.poly.homogeneous_components(in_block);
    if (comps.size() <= 1) return make_atom(a.poly, a.sign);
    const int D = comps.rbegin()->first;
    Polynomial s = block.norm_squared();
    s *= Rational(1) / block.radius_sq;
    Polynomial A;
    Polynomial B;
    for (const auto& [d, q] : comps) {
        const int gap = D - d;
        if (gap % 2 == 0) {
            A += q * s.pow(gap / 2);
        } else {
            B += q * s.pow((gap - 1) / 2);
        }
    }
    if (B.is_zero()) return make_atom(A, a.sign);
    if (A.is_zero()) return make_atom(B, a.sign);
    return radical_sign(A, B, s, a.sign);
}

}  // namespace

Expr shell_normalize(const Atom& a, const std::vector<VarBlock>& blocks) {
    Expr e = make_atom(a.poly, a.sign);
    for (const auto& b : blocks) e = map_atoms(e, [&](const Atom& x) { return normalize_one(x, b); });
    return e;
}

namespace {

void check_block_present(const Formula& f, const VarBlock& b) {
    const VarBlock* found = f.find_free_block(b.name);
    if (!found || !(*found == b))
        throw FormulaError(ErrorKind::UnknownVariable, "join block '" + b.name + "' is not a free block of the input");
}

Formula build(const Formula& psi, const JoinSpec& spec) {
    if (spec.p < 0) throw FormulaError(ErrorKind::Dimension, "copy-count mismatch: join parameter must be >= 0");
    if (spec.joined.empty()) throw FormulaError(ErrorKind::Dimension, "nothing to join");
    check_block_present(psi, spec.param);
    for (const auto& b : spec.carried) check_block_present(psi, b);
    for (const auto& b : spec.joined) check_block_present(psi, b);
    if (psi.free_blocks().size() != 1 + spec.carried.size() + spec.joined.size())
        throw FormulaError(ErrorKind::UnknownVariable, "input has free blocks outside the join spec");

    const bool closed = spec.variant == JoinVariant::Closed;
    const Topology want = closed ? Topology::Closed : Topology::Open;
    if (classify_topology(psi) != want)
        throw FormulaError(ErrorKind::Topology, std::string("join input matrix must be ") +
                                                    std::string(topology_name(want)));

    // Parts renamed per copy: joined blocks and every bound block.
    std::set<std::string> copied;
    for (const auto& b : spec.joined)
        for (const auto& p : b.parts) copied.insert(p.name);
    for (const auto& level : psi.prefix())
        for (const auto& b : level.blocks)
            for (const auto& p : b.parts) copied.insert(p.name);

    const VarBlock V = join_fiber_block(spec);
    const std::set<std::string> taken = psi.names();
    auto fresh = [&](const std::string& n) {
        if (taken.count(n)) throw FormulaError(ErrorKind::NameCollision, "fresh name '" + n + "' already in use");
    };
    fresh(V.name);
    for (std::size_t k = 0; k < V.parts.size(); ++k) {
        bool carried_part = false;
        for (const auto& c : spec.carried)
            for (const auto& p : c.parts) carried_part |= p.name == V.parts[k].name;
        if (!carried_part) fresh(V.parts[k].name);
    }

    std::vector<QuantLevel> prefix;
    for (const auto& level : psi.prefix()) {
        QuantLevel q{level.quantifier, {}};
        for (const auto& b : level.blocks)
            for (int i = 0; i <= spec.p; ++i) {
                VarBlock c = copy_block(b, spec.tag, i);
                fresh(c.name);
                for (const auto& p : c.parts) fresh(p.name);
                q.blocks.push_back(std::move(c));
            }
        prefix.push_back(std::move(q));
    }

    const std::string T = t_part_name(spec.tag);
    const std::string U = u_part_name(spec.tag);
    auto instance = [&](int i) {
        return rename_vars(psi.matrix(), [&](const Var& v) {
            return copied.count(v.part) ? Var{copy_name(v.part, spec.tag, i), v.index} : v;
        });
    };
    std::vector<VarBlock> outer{spec.param};
    outer.insert(outer.end(), spec.carried.begin(), spec.carried.end());

    Polynomial t_sum;
    for (int i = 0; i <= spec.p; ++i) t_sum += var(T, i);

    std::vector<Expr> theta;
    if (closed) {
        for (int i = 0; i <= spec.p; ++i) theta.push_back(atom(var(T, i), Sign::Ge));
        theta.push_back(atom(t_sum - Polynomial(Rational(1)), Sign::Eq));
        for (const auto& b : outer) theta.push_back(atom(b.norm_squared() - Polynomial(b.radius_sq), Sign::Eq));
        for (int i = 0; i <= spec.p; ++i) {
            std::vector<Expr> active;
            for (const auto& b : spec.joined) {
                const VarBlock c = copy_block(b, spec.tag, i);
                theta.push_back(atom(c.norm_squared() - Polynomial(c.radius_sq), Sign::Le));
                active.push_back(atom(c.norm_squared() - Polynomial(c.radius_sq), Sign::Eq));
            }
            active.push_back(instance(i));
            theta.push_back(make_or({atom(var(T, i), Sign::Eq), conj(std::move(active))}));
        }
        Polynomial total = var(U, 0).pow(2);
        for (const auto& b : outer) total += b.norm_squared();
        for (int i = 0; i <= spec.p; ++i)
            for (const auto& b : spec.joined) total += copy_block(b, spec.tag, i).norm_squared();
        for (int i = 0; i <= spec.p; ++i) total += var(T, i).pow(2);
        theta.push_back(atom(total - Polynomial(join_sphere_constant(spec)), Sign::Eq));
        theta.push_back(atom(var(U, 0), Sign::Ge));
    } else {
        const Rational width = Rational(1) / Rational(2 * (spec.p + 1));
        for (int i = 0; i <= spec.p; ++i) theta.push_back(atom(var(T, i), Sign::Gt));
        theta.push_back(atom(t_sum - Polynomial(Rational(1) - width), Sign::Gt));
        theta.push_back(atom(t_sum - Polynomial(Rational(1) + width), Sign::Lt));
        const Rational lo(1, 2);
        const Rational hi(3, 2);
        auto shell = [&](const VarBlock& b, std::vector<Expr>& out) {
            out.push_back(atom(b.norm_squared() - Polynomial(lo * b.radius_sq), Sign::Gt));
            out.push_back(atom(b.norm_squared() - Polynomial(hi * b.radius_sq), Sign::Lt));
        };
        for (int i = 0; i <= spec.p; ++i) {
            std::vector<VarBlock> normalized = outer;
            for (const auto& b : spec.joined) {
                const VarBlock c = copy_block(b, spec.tag, i);
                theta.push_back(atom(c.norm_squared() - Polynomial(hi * c.radius_sq), Sign::Lt));
                normalized.push_back(c);
            }
            std::vector<Expr> plus;
            for (const auto& b : normalized) shell(b, plus);
            plus.push_back(map_atoms(instance(i), [&](const Atom& a) { return shell_normalize(a, normalized); }));
            theta.push_back(make_or({atom(var(T, i) - Polynomial(width), Sign::Lt), conj(std::move(plus))}));
        }
        theta.push_back(atom(var(U, 0), Sign::Gt));
    }
    return Formula({spec.param, V}, std::move(prefix), make_and(std::move(theta)));
}

}  // namespace

Formula build_closed_join(const Formula& phi, const JoinSpec& spec) {
    if (!phi.is_quantifier_free()) throw FormulaError(ErrorKind::Syntax, "join input must be quantifier-free");
    if (spec.variant != JoinVariant::Closed) throw FormulaError(ErrorKind::Topology, "closed join needs a closed spec");
    return build(phi, spec);
}

Formula build_open_join(const Formula& phi, const JoinSpec& spec) {
    if (!phi.is_quantifier_free()) throw FormulaError(ErrorKind::Syntax, "join input must be quantifier-free");
    if (spec.variant != JoinVariant::Open) throw FormulaError(ErrorKind::Topology, "open join needs an open spec");
    return build(phi, spec);
}

Formula pull_quantifiers(const Formula& psi, const JoinSpec& spec) {
    return build(psi, spec);
}

}  // namespace toda
