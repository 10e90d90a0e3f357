// Fiberwise join formulas.
//
// Given Phi(X, C, B) with parameter block X, carried blocks C and joined
// blocks B, the builders emit a quantifier-free formula over X and one merged
// fiber block V = (C, B^0..B^p, T, U) whose realization is the (p+1)-fold
// fiberwise join of the projection of Phi along B.

#pragma once

#include <string>
#include <vector>

#include "toda/formula.hpp"

namespace toda {

enum class JoinVariant { Closed, Open };

struct JoinSpec {
    VarBlock param;
    std::vector<VarBlock> carried;
    std::vector<VarBlock> joined;
    int p = 1;
    JoinVariant variant = JoinVariant::Closed;
    std::string tag = "1";
};

std::string copy_name(const std::string& name, const std::string& tag, int i);
std::string t_part_name(const std::string& tag);
std::string u_part_name(const std::string& tag);
std::string fiber_block_name(const std::string& tag);

/// Constant on the right of the ambient sphere equation.
Rational join_sphere_constant(const JoinSpec& spec);
/// N = (k+1) + (p+1)(l+2) generalised to several carried/joined blocks;
/// the output has N + 1 free coordinates (the extra one is U).
int join_N(const JoinSpec& spec);
/// The merged output fiber block.
VarBlock join_fiber_block(const JoinSpec& spec);

Formula build_closed_join(const Formula& phi, const JoinSpec& spec);
Formula build_open_join(const Formula& phi, const JoinSpec& spec);

/// psi has free blocks param, carried and joined plus inner prefix levels.
/// Returns the prenex join: each inner block gets p+1 same-quantifier copies,
/// and copy i is used inside the i-th Phi instance.
Formula pull_quantifiers(const Formula& psi, const JoinSpec& spec);

/// Rewrites `atom` so that, for points with every listed block in its shell
/// rho/2 < |B|^2 < 3rho/2, it holds iff the atom holds at the radial
/// projection of each block onto its sphere.  Strict atoms yield strict-only
/// formulas and non-strict atoms non-strict-only formulas.
Expr shell_normalize(const Atom& atom, const std::vector<VarBlock>& blocks);

}  // namespace toda
