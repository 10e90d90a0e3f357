#include "toda/formula.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

namespace toda {

std::string_view sign_symbol(Sign s) {
    switch (s) {
        case Sign::Eq: return "=";
        case Sign::Ge: return ">=";
        case Sign::Gt: return ">";
        case Sign::Le: return "<=";
        case Sign::Lt: return "<";
        case Sign::Ne: return "!=";
    }
    return "?";
}

std::optional<Sign> parse_sign(std::string_view text) {
    if (text == "=") return Sign::Eq;
    if (text == ">=") return Sign::Ge;
    if (text == ">") return Sign::Gt;
    if (text == "<=") return Sign::Le;
    if (text == "<") return Sign::Lt;
    if (text == "!=") return Sign::Ne;
    return std::nullopt;
}

bool is_closed_type(Sign s) {
    return s == Sign::Eq || s == Sign::Ge || s == Sign::Le;
}

Sign negate_sign(Sign s) {
    switch (s) {
        case Sign::Eq: return Sign::Ne;
        case Sign::Ne: return Sign::Eq;
        case Sign::Ge: return Sign::Lt;
        case Sign::Lt: return Sign::Ge;
        case Sign::Le: return Sign::Gt;
        case Sign::Gt: return Sign::Le;
    }
    return s;
}

bool sign_holds(Sign s, int v) {
    switch (s) {
        case Sign::Eq: return v == 0;
        case Sign::Ge: return v >= 0;
        case Sign::Gt: return v > 0;
        case Sign::Le: return v <= 0;
        case Sign::Lt: return v < 0;
        case Sign::Ne: return v != 0;
    }
    return false;
}

Expr make_atom(Polynomial poly, Sign sign) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Atom;
    n->atom = Atom{std::move(poly), sign};
    return n;
}

namespace {

Expr make_nary(NodeKind kind, std::vector<Expr> children) {
    if (children.empty()) throw FormulaError(ErrorKind::Syntax, "connective with no operands");
    for (const auto& c : children)
        if (!c) throw FormulaError(ErrorKind::Syntax, "null operand");
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children = std::move(children);
    return n;
}

}  // namespace

Expr make_and(std::vector<Expr> children) { return make_nary(NodeKind::And, std::move(children)); }
Expr make_or(std::vector<Expr> children) { return make_nary(NodeKind::Or, std::move(children)); }
Expr make_not(Expr child) { return make_nary(NodeKind::Not, {std::move(child)}); }

Expr conj(std::vector<Expr> children) {
    if (children.size() == 1) return children.front();
    return make_and(std::move(children));
}

Expr disj(std::vector<Expr> children) {
    if (children.size() == 1) return children.front();
    return make_or(std::move(children));
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a->kind != b->kind) return false;
    if (a->kind == NodeKind::Atom) return a->atom == b->atom;
    if (a->children.size() != b->children.size()) return false;
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!structurally_equal(a->children[i], b->children[i])) return false;
    return true;
}

Expr nnf(const Expr& e, bool negate) {
    switch (e->kind) {
        case NodeKind::Atom:
            return negate ? make_atom(e->atom.poly, negate_sign(e->atom.sign)) : e;
        case NodeKind::Not:
            return nnf(e->children.front(), !negate);
        case NodeKind::And:
        case NodeKind::Or: {
            std::vector<Expr> kids;
            kids.reserve(e->children.size());
            for (const auto& c : e->children) kids.push_back(nnf(c, negate));
            const bool is_and = (e->kind == NodeKind::And) != negate;
            return is_and ? make_and(std::move(kids)) : make_or(std::move(kids));
        }
    }
    return e;
}

Expr map_atoms(const Expr& e, const std::function<Expr(const Atom&)>& f) {
    if (e->kind == NodeKind::Atom) return f(e->atom);
    std::vector<Expr> kids;
    kids.reserve(e->children.size());
    for (const auto& c : e->children) kids.push_back(map_atoms(c, f));
    auto n = std::make_shared<Node>();
    n->kind = e->kind;
    n->children = std::move(kids);
    return n;
}

Expr rename_vars(const Expr& e, const std::function<Var(const Var&)>& f) {
    return map_atoms(e, [&](const Atom& a) { return make_atom(a.poly.rename(f), a.sign); });
}

Expr substitute(const Expr& e, const std::map<Var, Polynomial>& values) {
    return map_atoms(e, [&](const Atom& a) { return make_atom(a.poly.substitute(values), a.sign); });
}

std::string_view topology_name(Topology t) {
    switch (t) {
        case Topology::Closed: return "closed";
        case Topology::Open: return "open";
        case Topology::Unknown: return "unknown";
    }
    return "unknown";
}

namespace {

// bit 0: has closed atom, bit 1: has open atom, bit 2: has negation
int topology_bits(const Expr& e) {
    if (e->kind == NodeKind::Atom) return is_closed_type(e->atom.sign) ? 1 : 2;
    int bits = e->kind == NodeKind::Not ? 4 : 0;
    for (const auto& c : e->children) bits |= topology_bits(c);
    return bits;
}

}  // namespace

Topology classify_matrix(const Expr& e) {
    const int bits = topology_bits(e);
    if (bits == 1) return Topology::Closed;
    if (bits == 2) return Topology::Open;
    return Topology::Unknown;
}

std::size_t atom_count(const Expr& e) {
    if (e->kind == NodeKind::Atom) return 1;
    std::size_t n = 0;
    for (const auto& c : e->children) n += atom_count(c);
    return n;
}

int max_degree(const Expr& e) {
    if (e->kind == NodeKind::Atom) return e->atom.poly.total_degree();
    int d = 0;
    for (const auto& c : e->children) d = std::max(d, max_degree(c));
    return d;
}

void collect_vars(const Expr& e, std::set<Var>& out) {
    if (e->kind == NodeKind::Atom) {
        auto vs = e->atom.poly.variables();
        out.insert(vs.begin(), vs.end());
        return;
    }
    for (const auto& c : e->children) collect_vars(c, out);
}

VarBlock VarBlock::sphere(const std::string& name, int dim) {
    return VarBlock{name, {Part{name, dim}}, Rational(1)};
}

int VarBlock::coord_count() const {
    int n = 0;
    for (const auto& p : parts) n += p.size();
    return n;
}

std::vector<Var> VarBlock::coords() const {
    std::vector<Var> out;
    for (const auto& p : parts)
        for (int i = 0; i < p.size(); ++i) out.push_back(Var{p.name, i});
    return out;
}

bool VarBlock::is_simple() const {
    return parts.size() == 1 && parts.front().name == name && radius_sq == 1;
}

std::string_view quantifier_name(Quantifier q) {
    return q == Quantifier::Exists ? "exists" : "forall";
}

namespace {

void check_name(const std::string& name) {
    static const std::regex re("[A-Za-z_][A-Za-z0-9_#]*");
    if (!std::regex_match(name, re)) throw FormulaError(ErrorKind::Syntax, "invalid name '" + name + "'");
}

}  // namespace

Formula::Formula(std::vector<VarBlock> free_blocks, std::vector<QuantLevel> prefix, Expr matrix)
    : free_(std::move(free_blocks)), prefix_(std::move(prefix)), matrix_(std::move(matrix)) {
    if (!matrix_) throw FormulaError(ErrorKind::Syntax, "empty matrix");
    for (std::size_t j = 0; j < prefix_.size(); ++j) {
        if (prefix_[j].blocks.empty()) throw FormulaError(ErrorKind::Syntax, "empty quantifier level");
        if (j > 0 && prefix_[j].quantifier == prefix_[j - 1].quantifier)
            throw FormulaError(ErrorKind::Alternation, "quantifier levels " + std::to_string(j) + " and " +
                                                           std::to_string(j + 1) + " do not alternate");
    }
    std::set<std::string> block_names;
    std::map<std::string, int> part_dims;
    const auto blocks = all_blocks();
    for (const auto& b : blocks) {
        check_name(b.name);
        if (b.parts.empty()) throw FormulaError(ErrorKind::Dimension, "block '" + b.name + "' has no parts");
        if (b.radius_sq <= 0) throw FormulaError(ErrorKind::Dimension, "block '" + b.name + "' has radius <= 0");
        if (!block_names.insert(b.name).second)
            throw FormulaError(ErrorKind::DuplicateName, "duplicate block name '" + b.name + "'");
        for (const auto& p : b.parts) {
            check_name(p.name);
            if (p.dim < 0) throw FormulaError(ErrorKind::Dimension, "negative dimension for '" + p.name + "'");
            if (!part_dims.emplace(p.name, p.dim).second)
                throw FormulaError(ErrorKind::DuplicateName, "duplicate part name '" + p.name + "'");
        }
    }
    for (const auto& b : blocks)
        for (const auto& p : b.parts)
            if (p.name != b.name && block_names.count(p.name))
                throw FormulaError(ErrorKind::DuplicateName, "part '" + p.name + "' clashes with a block name");
    std::set<Var> vars;
    collect_vars(matrix_, vars);
    for (const auto& v : vars) {
        auto it = part_dims.find(v.part);
        if (it == part_dims.end())
            throw FormulaError(ErrorKind::UnknownVariable, "unknown variable '" + to_string(v) + "'");
        if (v.index < 0 || v.index > it->second)
            throw FormulaError(ErrorKind::UnknownVariable, "coordinate out of range '" + to_string(v) + "'");
    }
}

std::vector<VarBlock> Formula::all_blocks() const {
    std::vector<VarBlock> out = free_;
    for (const auto& level : prefix_) out.insert(out.end(), level.blocks.begin(), level.blocks.end());
    return out;
}

const VarBlock* Formula::find_free_block(const std::string& name) const {
    for (const auto& b : free_)
        if (b.name == name) return &b;
    return nullptr;
}

std::set<std::string> Formula::names() const {
    std::set<std::string> out;
    for (const auto& b : all_blocks()) {
        out.insert(b.name);
        for (const auto& p : b.parts) out.insert(p.name);
    }
    return out;
}

bool Formula::is_compact_hierarchy_valid() const {
    return classify_matrix(matrix_) == Topology::Closed;
}

bool structurally_equal(const Formula& a, const Formula& b) {
    return a.free_blocks() == b.free_blocks() && a.prefix() == b.prefix() &&
           structurally_equal(a.matrix(), b.matrix());
}

Topology classify_topology(const Formula& f) {
    return classify_matrix(f.matrix());
}

Formula to_nnf_complement(const Formula& f) {
    std::vector<QuantLevel> prefix = f.prefix();
    for (auto& level : prefix) level.quantifier = flip(level.quantifier);
    return Formula(f.free_blocks(), std::move(prefix), nnf(f.matrix(), true));
}

std::map<std::string, std::pair<std::string, int>> part_layout(const std::vector<VarBlock>& blocks) {
    std::map<std::string, std::pair<std::string, int>> out;
    for (const auto& b : blocks) {
        int offset = 0;
        for (const auto& p : b.parts) {
            out[p.name] = {b.name, offset};
            offset += p.size();
        }
    }
    return out;
}

namespace {

template <class T>
std::function<T(const Var&)> make_lookup(const Formula& f, const std::map<std::string, std::vector<T>>& pt) {
    for (const auto& b : f.free_blocks()) {
        auto it = pt.find(b.name);
        if (it == pt.end())
            throw FormulaError(ErrorKind::MissingAssignment, "no value for block '" + b.name + "'");
        if (static_cast<int>(it->second.size()) != b.coord_count())
            throw FormulaError(ErrorKind::Dimension, "wrong coordinate count for block '" + b.name + "'");
    }
    auto layout = std::make_shared<std::map<std::string, std::pair<std::string, int>>>(part_layout(f.free_blocks()));
    return [layout, &pt](const Var& v) -> T {
        auto it = layout->find(v.part);
        if (it == layout->end())
            throw FormulaError(ErrorKind::MissingAssignment, "variable '" + to_string(v) + "' is not free");
        return pt.at(it->second.first)[it->second.second + v.index];
    };
}

bool eval_exact(const Expr& e, const std::function<Rational(const Var&)>& lookup) {
    switch (e->kind) {
        case NodeKind::Atom: {
            const Rational q = e->atom.poly.evaluate<Rational>(lookup);
            return sign_holds(e->atom.sign, sgn(q));
        }
        case NodeKind::Not:
            return !eval_exact(e->children.front(), lookup);
        case NodeKind::And:
            for (const auto& c : e->children)
                if (!eval_exact(c, lookup)) return false;
            return true;
        case NodeKind::Or:
            for (const auto& c : e->children)
                if (eval_exact(c, lookup)) return true;
            return false;
    }
    return false;
}

bool numeric_atom(Sign s, double q, double tol) {
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

bool eval_numeric(const Expr& e, const std::function<double(const Var&)>& lookup, double tol) {
    switch (e->kind) {
        case NodeKind::Atom:
            return numeric_atom(e->atom.sign, e->atom.poly.evaluate<double>(lookup), tol);
        case NodeKind::Not:
            return !eval_numeric(e->children.front(), lookup, tol);
        case NodeKind::And:
            for (const auto& c : e->children)
                if (!eval_numeric(c, lookup, tol)) return false;
            return true;
        case NodeKind::Or:
            for (const auto& c : e->children)
                if (eval_numeric(c, lookup, tol)) return true;
            return false;
    }
    return false;
}

}  // namespace

bool eval_formula(const Formula& f, const ExactPoint& pt) {
    if (!f.is_quantifier_free()) throw FormulaError(ErrorKind::Syntax, "eval_formula needs an empty prefix");
    return eval_exact(f.matrix(), make_lookup<Rational>(f, pt));
}

bool eval_formula(const Formula& f, const NumericPoint& pt, double tol) {
    if (!f.is_quantifier_free()) throw FormulaError(ErrorKind::Syntax, "eval_formula needs an empty prefix");
    return eval_numeric(f.matrix(), make_lookup<double>(f, pt), tol);
}

bool on_spheres(const Formula& f, const ExactPoint& pt) {
    for (const auto& b : f.free_blocks()) {
        auto it = pt.find(b.name);
        if (it == pt.end()) throw FormulaError(ErrorKind::MissingAssignment, "no value for block '" + b.name + "'");
        Rational s = 0;
        for (const auto& x : it->second) s += x * x;
        if (s != b.radius_sq) return false;
    }
    return true;
}

bool on_spheres(const Formula& f, const NumericPoint& pt, double tol) {
    for (const auto& b : f.free_blocks()) {
        auto it = pt.find(b.name);
        if (it == pt.end()) throw FormulaError(ErrorKind::MissingAssignment, "no value for block '" + b.name + "'");
        double s = 0;
        for (double x : it->second) s += x * x;
        if (std::abs(s - b.radius_sq.get_d()) > tol) return false;
    }
    return true;
}

Formula restrict_fiber(const Formula& f, const std::string& block, const std::vector<Rational>& value) {
    const VarBlock* b = f.find_free_block(block);
    if (!b) throw FormulaError(ErrorKind::MissingAssignment, "'" + block + "' is not a free block");
    if (static_cast<int>(value.size()) != b->coord_count())
        throw FormulaError(ErrorKind::Dimension, "value for '" + block + "' has " + std::to_string(value.size()) +
                                                     " coordinates, expected " + std::to_string(b->coord_count()));
    Rational s = 0;
    for (const auto& x : value) s += x * x;
    if (s != b->radius_sq) throw FormulaError(ErrorKind::OffSphere, "value for '" + block + "' is off the sphere");
    std::map<Var, Polynomial> values;
    const auto coords = b->coords();
    for (std::size_t i = 0; i < coords.size(); ++i) values.emplace(coords[i], Polynomial(value[i]));
    std::vector<VarBlock> free;
    for (const auto& fb : f.free_blocks())
        if (fb.name != block) free.push_back(fb);
    return Formula(std::move(free), f.prefix(), substitute(f.matrix(), values));
}

}  // namespace toda
