#include "toda/fixtures.hpp"

#include <random>

#include "toda/bruteforce.hpp"
#include "toda/formula_io.hpp"

namespace toda {

namespace {

Box cube(double w, int n) {
    return Box{std::vector<double>(static_cast<std::size_t>(n), -w), std::vector<double>(static_cast<std::size_t>(n), w)};
}

SampleConfig box_sampling(const Box& b, int samples, double radius, int landmarks) {
    SampleConfig s;
    s.box = b;
    s.samples = samples;
    s.radius = radius;
    s.landmarks = landmarks;
    return s;
}

}  // namespace

std::vector<HomologyFixture> homology_fixtures() {
    std::vector<HomologyFixture> out;
    auto add = [&](std::string name, const std::string& body, int n, double w, int res, std::vector<long long> b,
                   SampleConfig s) {
        const std::string decl = n == 2 ? "(X 1)" : "(X 2)";
        Formula f = parse_formula("(sentence (free " + decl + ") (body " + body + "))");
        s.box = cube(w, n);
        out.push_back({std::move(name), std::move(f), cube(w, n), res, PoincarePolynomial(std::move(b)), s});
    };
    const std::string r2 = "(mono 1 (X.0 2)) (mono 1 (X.1 2))";
    const std::string r3 = r2 + " (mono 1 (X.2 2))";
    add("circle band", "(and (atom <= (poly " + r2 + " (mono -11/10)) 0) (atom >= (poly " + r2 + " (mono -9/10)) 0))", 2,
        2.0, 64, {1, 1}, box_sampling({}, 3000, 0.25, 250));
    add("disk", "(atom <= (poly " + r2 + " (mono -1)) 0)", 2, 2.0, 64, {1}, box_sampling({}, 3000, 0.3, 250));
    add("two disks",
        "(or (atom <= (poly " + r2 + " (mono -12/5 (X.0 1)) (mono 119/100)) 0)"
        " (atom <= (poly " + r2 + " (mono 12/5 (X.0 1)) (mono 119/100)) 0))",
        2, 2.0, 64, {2}, box_sampling({}, 3000, 0.3, 250));
    add("sphere band", "(and (atom <= (poly " + r3 + " (mono -13/10)) 0) (atom >= (poly " + r3 + " (mono -7/10)) 0))", 3,
        1.5, 32, {1, 0, 1}, box_sampling({}, 6000, 0.45, 500));
    add("annulus", "(and (atom <= (poly " + r2 + " (mono -1)) 0) (atom >= (poly " + r2 + " (mono -1/4)) 0))", 2, 2.0, 64,
        {1, 1}, box_sampling({}, 3000, 0.3, 250));
    return out;
}

std::vector<JoinFixture> join_fixtures() {
    SampleConfig s;
    s.samples = 4000;
    s.radius = 1.5;
    s.landmarks = 300;
    std::vector<JoinFixture> out;
    const Formula s0 = parse_formula("(sentence (free (Y 0)) (body (atom = (poly (mono 0)) 0)))");
    const Formula s1 = parse_formula("(sentence (free (Y 1)) (body (atom = (poly (mono 0)) 0)))");
    out.push_back({"S^0 x S^0", parse_formula("(sentence (free (Y 0) (Z 0)) (body (atom = (poly (mono 0)) 0)))"), 1, s0,
                   s});
    const Formula half = parse_formula(
        "(sentence (free (Y 0) (Z 1)) (body (atom >= (poly (mono 1 (Y.0 1) (Z.0 1))) 0)))");
    out.push_back({"S^0 x S^1", half, 1, s0, s});
    out.push_back({"S^0 x S^1", half, 2, s0, s});
    out.push_back({"diagonal of S^1 x S^1",
                   parse_formula("(sentence (free (Y 1) (Z 1)) (body (and"
                                 " (atom = (poly (mono 1 (Y.0 1) (Z.1 1)) (mono -1 (Y.1 1) (Z.0 1))) 0)"
                                 " (atom >= (poly (mono 1 (Y.0 1) (Z.0 1)) (mono 1 (Y.1 1) (Z.1 1))) 0))))"),
                   1, s1, s});
    return out;
}

namespace {

const Rational kCoeffs[] = {make_rational(-2), make_rational(-3, 2), make_rational(-1), make_rational(-1, 2),
                            make_rational(1, 2), make_rational(1), make_rational(3, 2), make_rational(2)};

Polynomial random_poly(const std::vector<Var>& vars, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nterms(1, 3);
    std::uniform_int_distribution<std::size_t> pick_var(0, vars.size() - 1);
    std::uniform_int_distribution<int> pick_coeff(0, 7);
    std::uniform_int_distribution<int> deg(1, 2);
    std::uniform_int_distribution<int> cst(-6, 6);
    Polynomial p(make_rational(cst(rng), 4));
    const int t = nterms(rng);
    for (int i = 0; i < t; ++i) {
        Polynomial m(kCoeffs[pick_coeff(rng)]);
        const int d = deg(rng);
        for (int k = 0; k < d; ++k) m = m * Polynomial::variable(vars[pick_var(rng)]);
        p += m;
    }
    return p;
}

Expr random_atom(const std::vector<Var>& vars, std::mt19937_64& rng) {
    const Sign s = std::bernoulli_distribution(0.5)(rng) ? Sign::Ge : Sign::Le;
    return make_atom(random_poly(vars, rng), s);
}

Expr random_matrix(const std::vector<Var>& vars, std::mt19937_64& rng) {
    const int atoms = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<Expr> parts;
    for (int i = 0; i < atoms; ++i) parts.push_back(random_atom(vars, rng));
    if (atoms == 1) return parts[0];
    if (atoms == 2) return std::bernoulli_distribution(0.5)(rng) ? make_and(parts) : make_or(parts);
    Expr inner = std::bernoulli_distribution(0.5)(rng) ? make_and({parts[0], parts[1]}) : make_or({parts[0], parts[1]});
    return std::bernoulli_distribution(0.5)(rng) ? make_and({inner, parts[2]}) : make_or({inner, parts[2]});
}

std::vector<Var> coords(const std::vector<VarBlock>& blocks) {
    std::vector<Var> out;
    for (const auto& b : blocks)
        for (const auto& v : b.coords()) out.push_back(v);
    return out;
}

// Decided at margin 0.1 and unchanged at 0.05.
Truth robust_truth(const Formula& f) {
    BruteConfig wide;
    wide.delta = 0.1;
    const Truth a = brute_decide(f, wide).truth;
    if (a == Truth::Unknown) return a;
    BruteConfig narrow;
    narrow.delta = 0.05;
    return brute_decide(f, narrow).truth == a ? a : Truth::Unknown;
}

}  // namespace

std::vector<GeneratedSentence> generate_sentences(SentenceFamily family, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int want_true = (count + 1) / 2;
    const int want_false = count / 2;
    int have_true = 0;
    int have_false = 0;
    std::vector<GeneratedSentence> out;
    for (int attempt = 0; attempt < 200000 && static_cast<int>(out.size()) < count; ++attempt) {
        std::vector<QuantLevel> prefix;
        std::string label;
        if (family == SentenceFamily::Omega2) {
            const Quantifier lead = std::bernoulli_distribution(0.5)(rng) ? Quantifier::Forall : Quantifier::Exists;
            const int inner_dim = std::uniform_int_distribution<int>(0, 1)(rng);
            prefix.push_back({lead, {VarBlock::sphere("Y", 0)}});
            prefix.push_back({flip(lead), {VarBlock::sphere("Z", inner_dim)}});
            label = std::string(lead == Quantifier::Forall ? "AE" : "EA") + " S^0 S^" + std::to_string(inner_dim);
        } else {
            const int dim = std::uniform_int_distribution<int>(1, 2)(rng);
            const Quantifier q = family == SentenceFamily::Sigma1 ? Quantifier::Exists : Quantifier::Forall;
            prefix.push_back({q, {VarBlock::sphere("Z", dim)}});
            label = std::string(q == Quantifier::Exists ? "E" : "A") + " S^" + std::to_string(dim);
        }
        std::vector<VarBlock> blocks;
        for (const auto& l : prefix) blocks.insert(blocks.end(), l.blocks.begin(), l.blocks.end());
        const auto vars = coords(blocks);
        Expr m = random_matrix(vars, rng);
        if (family == SentenceFamily::Omega2) {
            // the matrix must couple the two blocks
            std::set<Var> used;
            collect_vars(m, used);
            bool y = false;
            bool z = false;
            for (const auto& v : used) (v.part == "Y" ? y : z) = true;
            if (!y || !z) continue;
        }
        Formula f({}, std::move(prefix), std::move(m));
        const Truth t = robust_truth(f);
        if (t == Truth::True && have_true < want_true) {
            ++have_true;
        } else if (t == Truth::False && have_false < want_false) {
            ++have_false;
        } else {
            continue;
        }
        out.push_back({label + " #" + std::to_string(out.size() + 1), std::move(f), t});
    }
    if (static_cast<int>(out.size()) < count) throw FormulaError(ErrorKind::Oracle, "sentence generator ran out of attempts");
    return out;
}

Formula size_input(int atoms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const VarBlock Y = VarBlock::sphere("Y", 1);
    const VarBlock Z = VarBlock::sphere("Z", 1);
    const auto vars = coords({Y, Z});
    std::vector<Expr> parts;
    for (int i = 0; i < atoms; ++i) parts.push_back(random_atom(vars, rng));
    return Formula({}, {{Quantifier::Forall, {Y}}, {Quantifier::Exists, {Z}}}, conj(std::move(parts)));
}

}  // namespace toda
