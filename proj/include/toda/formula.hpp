// Quantified formulas over products of spheres.
//
// A block is a tuple of coordinates constrained to a sphere |B|^2 = radius_sq.
// User blocks have one part and radius 1; blocks produced by the join builder
// concatenate several parts (copies, T, U) under one sphere constraint.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "toda/polynomial.hpp"

namespace toda {

enum class ErrorKind {
    Syntax,
    UnknownVariable,
    Alternation,
    DuplicateName,
    Dimension,
    OffSphere,
    MissingAssignment,
    Topology,
    NameCollision,
    Oracle,
};

class FormulaError : public std::runtime_error {
public:
    FormulaError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

enum class Sign { Eq, Ge, Gt, Le, Lt, Ne };

std::string_view sign_symbol(Sign s);
std::optional<Sign> parse_sign(std::string_view text);
bool is_closed_type(Sign s);
Sign negate_sign(Sign s);
/// Whether a value with the given sign (-1, 0, +1) satisfies `s`.
bool sign_holds(Sign s, int value_sign);

struct Atom {
    Polynomial poly;
    Sign sign = Sign::Ge;

    bool operator==(const Atom&) const = default;
};

enum class NodeKind { Atom, And, Or, Not };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind = NodeKind::Atom;
    Atom atom;
    std::vector<Expr> children;
};

Expr make_atom(Polynomial poly, Sign sign);
Expr make_and(std::vector<Expr> children);
Expr make_or(std::vector<Expr> children);
Expr make_not(Expr child);
/// Like make_and/make_or but a single child is returned unchanged.
Expr conj(std::vector<Expr> children);
Expr disj(std::vector<Expr> children);

bool structurally_equal(const Expr& a, const Expr& b);
/// Negation normal form; `negate` complements the result.
Expr nnf(const Expr& e, bool negate = false);
Expr map_atoms(const Expr& e, const std::function<Expr(const Atom&)>& f);
Expr rename_vars(const Expr& e, const std::function<Var(const Var&)>& f);
Expr substitute(const Expr& e, const std::map<Var, Polynomial>& values);

enum class Topology { Closed, Open, Unknown };
std::string_view topology_name(Topology t);
Topology classify_matrix(const Expr& e);

std::size_t atom_count(const Expr& e);
int max_degree(const Expr& e);
void collect_vars(const Expr& e, std::set<Var>& out);

struct Part {
    std::string name;
    int dim = 0;  // the part has dim + 1 coordinates

    int size() const { return dim + 1; }
    bool operator==(const Part&) const = default;
};

struct VarBlock {
    std::string name;
    std::vector<Part> parts;
    Rational radius_sq{1};

    static VarBlock sphere(const std::string& name, int dim);

    int coord_count() const;
    int sphere_dim() const { return coord_count() - 1; }
    std::vector<Var> coords() const;
    /// One part named like the block, unit radius.
    bool is_simple() const;
    Polynomial norm_squared() const { return Polynomial::norm_squared(coords()); }

    bool operator==(const VarBlock&) const = default;
};

enum class Quantifier { Exists, Forall };
inline Quantifier flip(Quantifier q) { return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists; }
std::string_view quantifier_name(Quantifier q);

struct QuantLevel {
    Quantifier quantifier = Quantifier::Exists;
    std::vector<VarBlock> blocks;

    bool operator==(const QuantLevel&) const = default;
};

/// Prenex formula: free blocks (parameter first, then fiber), alternating
/// prefix levels, quantifier-free matrix.  Validated on construction.
class Formula {
public:
    Formula(std::vector<VarBlock> free_blocks, std::vector<QuantLevel> prefix, Expr matrix);

    const std::vector<VarBlock>& free_blocks() const { return free_; }
    const std::vector<QuantLevel>& prefix() const { return prefix_; }
    const Expr& matrix() const { return matrix_; }

    int alternation() const { return static_cast<int>(prefix_.size()); }
    bool is_quantifier_free() const { return prefix_.empty(); }
    std::vector<VarBlock> all_blocks() const;
    const VarBlock* find_free_block(const std::string& name) const;
    /// Every part and block name in use.
    std::set<std::string> names() const;
    /// Closed matrix and alternating prefix.
    bool is_compact_hierarchy_valid() const;

private:
    std::vector<VarBlock> free_;
    std::vector<QuantLevel> prefix_;
    Expr matrix_;
};

bool structurally_equal(const Formula& a, const Formula& b);

Topology classify_topology(const Formula& f);
Formula to_nnf_complement(const Formula& f);

/// Block name -> coordinates (concatenated over parts).
using ExactPoint = std::map<std::string, std::vector<Rational>>;
using NumericPoint = std::map<std::string, std::vector<double>>;

/// Matrix semantics at a point; sphere constraints are not checked here.
bool eval_formula(const Formula& f, const ExactPoint& pt);
/// Binary64 evaluation: "= 0" means |q| <= tol, ">= 0" means q >= -tol,
/// "> 0" means q > tol, and the remaining signs by negation.
bool eval_formula(const Formula& f, const NumericPoint& pt, double tol = 0.0);
bool on_spheres(const Formula& f, const ExactPoint& pt);
bool on_spheres(const Formula& f, const NumericPoint& pt, double tol = 1e-12);

Formula restrict_fiber(const Formula& f, const std::string& block, const std::vector<Rational>& value);

/// Part name -> (block name, coordinate offset inside the block).
std::map<std::string, std::pair<std::string, int>> part_layout(const std::vector<VarBlock>& blocks);

}  // namespace toda
