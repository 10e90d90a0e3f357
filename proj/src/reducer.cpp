#include "toda/reducer.hpp"

#include <algorithm>
#include <stdexcept>

#include "toda/formula_io.hpp"

namespace toda {

std::string_view join_policy_name(JoinPolicy p) {
    return p == JoinPolicy::MPlus1 ? "m_plus_1" : "paper_m";
}

std::optional<JoinPolicy> parse_join_policy(std::string_view s) {
    if (s == "m_plus_1") return JoinPolicy::MPlus1;
    if (s == "paper_m") return JoinPolicy::MOnly;
    return std::nullopt;
}

std::string_view truth_name(Truth t) {
    switch (t) {
        case Truth::True: return "true";
        case Truth::False: return "false";
        case Truth::Unknown: return "unknown";
    }
    return "unknown";
}

Formula lift_sentence(const Formula& f, bool* lifted_param, bool* lifted_fiber) {
    std::vector<VarBlock> free = f.free_blocks();
    if (free.size() > 2) throw FormulaError(ErrorKind::Dimension, "at most two free blocks (parameter, fiber)");
    const bool add_x = free.empty();
    const bool add_y = free.size() < 2;
    if (add_x) free.push_back(VarBlock::sphere(kDummyParam, 0));
    if (add_y) free.push_back(VarBlock::sphere(kDummyFiber, 0));
    if (lifted_param) *lifted_param = add_x;
    if (lifted_fiber) *lifted_fiber = add_y;
    if (!add_x && !add_y) return f;
    const auto names = f.names();
    if ((add_x && names.count(kDummyParam)) || (add_y && names.count(kDummyFiber)))
        throw FormulaError(ErrorKind::NameCollision, "lifting block name already in use");
    return Formula(std::move(free), f.prefix(), f.matrix());
}

namespace {

int coords_of(const std::vector<QuantLevel>& prefix) {
    int n = 0;
    for (const auto& level : prefix)
        for (const auto& b : level.blocks) n += b.coord_count();
    return n;
}

int coords_of(const std::vector<VarBlock>& blocks) {
    int n = 0;
    for (const auto& b : blocks) n += b.coord_count();
    return n;
}

Topology flip(Topology t) {
    return t == Topology::Closed ? Topology::Open : Topology::Closed;
}

}  // namespace

ReductionArtifact reduce_with_polarity(const Formula& input, Topology polarity, const ReduceOptions& options) {
    if (polarity == Topology::Unknown) throw FormulaError(ErrorKind::Topology, "polarity must be closed or open");
    bool lifted_param = false;
    bool lifted_fiber = false;
    Formula cur = lift_sentence(input, &lifted_param, &lifted_fiber);
    if (classify_topology(cur) != polarity)
        throw FormulaError(ErrorKind::Topology, "step 0: matrix is " + std::string(topology_name(classify_topology(cur))) +
                                                    ", expected " + std::string(topology_name(polarity)));
    const VarBlock X = cur.free_blocks()[0];
    std::vector<CoeffStage> stages;
    std::vector<StepTrace> trace;
    const int omega = cur.alternation();
    for (int j = 0; j < omega; ++j) {
        StepTrace st;
        st.step = j + 1;
        st.original = input.prefix()[j].quantifier;
        st.effective = cur.prefix().front().quantifier;
        st.polarity_before = polarity;
        const VarBlock Y = cur.free_blocks()[1];
        const int m = Y.sphere_dim();
        const int p = options.policy == JoinPolicy::MPlus1 ? m + 1 : std::max(m, 0);
        st.p = p;
        st.fiber_dim = m;
        if (st.effective == Quantifier::Forall) {
            cur = to_nnf_complement(cur);
            polarity = flip(polarity);
        }
        if (classify_topology(cur) != polarity)
            throw FormulaError(ErrorKind::Topology, "step " + std::to_string(j + 1) + ": unsupported sign combination (" +
                                                        std::string(topology_name(classify_topology(cur))) + " matrix)");
        const QuantLevel level = cur.prefix().front();
        std::vector<VarBlock> free{X, Y};
        free.insert(free.end(), level.blocks.begin(), level.blocks.end());
        std::vector<QuantLevel> rest(cur.prefix().begin() + 1, cur.prefix().end());
        const Formula psi(std::move(free), std::move(rest), cur.matrix());
        JoinSpec spec;
        spec.param = X;
        spec.carried = {Y};
        spec.joined = level.blocks;
        spec.p = p;
        spec.variant = polarity == Topology::Closed ? JoinVariant::Closed : JoinVariant::Open;
        spec.tag = std::to_string(j + 1);
        cur = pull_quantifiers(psi, spec);
        if (st.effective == Quantifier::Exists) {
            stages.push_back(CoeffStage::truncate(m));
        } else {
            stages.push_back(CoeffStage::duality(
                m, st.polarity_before == Topology::Closed ? DualDirection::ClosedK : DualDirection::OpenK));
        }
        st.polarity_after = polarity;
        st.free_coords = coords_of(cur.free_blocks());
        st.bound_coords = coords_of(cur.prefix());
        st.atoms = atom_count(cur.matrix());
        trace.push_back(st);
    }
    std::vector<CoeffStage> chain{CoeffStage::identity()};
    chain.insert(chain.end(), stages.rbegin(), stages.rend());
    const VarBlock fiber = cur.free_blocks()[1];
    return ReductionArtifact{cur, std::move(chain), X, fiber, fiber.sphere_dim(), polarity,
                             lifted_param, lifted_fiber, std::move(trace)};
}

ReductionArtifact reduce(const Formula& f, const ReduceOptions& options) {
    if (!f.is_compact_hierarchy_valid())
        throw FormulaError(ErrorKind::Topology, "input is not compact-hierarchy valid (matrix must be closed)");
    return reduce_with_polarity(f, Topology::Closed, options);
}

namespace {

// Chain result for the requested output degrees, or Unknown with a reason.
Decision evaluate_chain(const ReductionArtifact& a, const std::vector<Rational>& x, const FiberOracle& oracle,
                        const std::set<int>& out_degrees) {
    Decision d;
    const Formula fiber = restrict_fiber(a.theta, a.param_block.name, x);
    const std::set<int> needed = needed_input_degrees(a.chain, out_degrees);
    d.needed_degrees.assign(needed.begin(), needed.end());
    const int max_needed = needed.empty() ? 0 : *needed.rbegin();
    d.fiber_estimate = oracle.estimate(fiber, max_needed);
    const BettiEstimate& est = d.fiber_estimate;
    if (!est.converged) {
        d.reason = "oracle estimate not converged";
        return d;
    }
    if (est.known_degree < max_needed) {
        d.reason = "oracle supplies degrees up to " + std::to_string(est.known_degree) + ", chain needs " +
                   std::to_string(max_needed);
        return d;
    }
    try {
        std::vector<long long> known(est.betti.begin(),
                                     est.betti.begin() + std::min<std::size_t>(est.betti.size(), est.known_degree + 1));
        d.fiber_poincare = PoincarePolynomial(std::move(known));
        d.result = apply_chain(a.chain, *d.fiber_poincare);
    } catch (const std::domain_error& e) {
        d.reason = std::string("inconsistent Betti numbers: ") + e.what();
        d.result.reset();
    }
    return d;
}

}  // namespace

Decision decide(const ReductionArtifact& artifact, const std::vector<Rational>& x, const FiberOracle& oracle) {
    Decision d = evaluate_chain(artifact, x, oracle, {0});
    if (d.result) d.truth = (*d.result)[0] > 0 ? Truth::True : Truth::False;
    return d;
}

SentenceDecision decide_sentence(const Formula& f, const FiberOracle& oracle, const ReduceOptions& options) {
    if (!f.free_blocks().empty()) throw FormulaError(ErrorKind::Dimension, "decide_sentence needs a sentence");
    const std::vector<Rational> x{1};
    if (f.alternation() <= 1) {
        ReductionArtifact a = reduce(f, options);
        Decision d = decide(a, x, oracle);
        return SentenceDecision{std::move(d), std::move(a), SentenceStrategy::Uniform, false, -1};
    }
    if (!f.is_compact_hierarchy_valid())
        throw FormulaError(ErrorKind::Topology, "input is not compact-hierarchy valid (matrix must be closed)");
    const bool negated = f.prefix().front().quantifier == Quantifier::Exists;
    const Formula g = negated ? to_nnf_complement(f) : f;
    const QuantLevel& lead = g.prefix().front();
    if (lead.blocks.size() != 1)
        throw FormulaError(ErrorKind::Dimension, "leading quantifier level must hold a single block");
    const VarBlock Y = lead.blocks.front();
    std::vector<QuantLevel> rest(g.prefix().begin() + 1, g.prefix().end());
    const Formula h({VarBlock::sphere(kDummyParam, 0), Y}, std::move(rest), g.matrix());
    ReductionArtifact a = reduce_with_polarity(h, negated ? Topology::Open : Topology::Closed, options);
    const int top = Y.sphere_dim();
    Decision d = evaluate_chain(a, x, oracle, {top});
    if (d.result) {
        const bool whole = top == 0 ? (*d.result)[0] == 2 : (*d.result)[top] == 1;
        d.truth = (whole != negated) ? Truth::True : Truth::False;
    }
    return SentenceDecision{std::move(d), std::move(a), SentenceStrategy::PromoteLeading, negated, top};
}

SizeReport size_report(const ReductionArtifact& a) {
    SizeReport r;
    r.atoms = atom_count(a.theta.matrix());
    r.free_coords = coords_of(a.theta.free_blocks());
    r.bound_coords = coords_of(a.theta.prefix());
    r.variables = r.free_coords + r.bound_coords;
    r.max_degree = max_degree(a.theta.matrix());
    for (const auto& s : a.trace) r.join_parameters.push_back(s.p);
    r.text_bytes = print_formula(a.theta).size();
    return r;
}

}  // namespace toda
