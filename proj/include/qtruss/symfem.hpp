#pragma once

#include <array>
#include <vector>

#include "qtruss/boolpoly.hpp"
#include "qtruss/truss.hpp"

namespace qtruss {

// Symbolic finite-element pipeline: the cross-section areas are boolean
// combinations A_n = sum_c q_{n,c} A_{n,c}, so stiffness, displacements and
// stresses become pseudo-boolean polynomial expressions in the choice
// variables q. Variable layout: element n, choice c -> VarId n*C + c.

/// Reduced symbolic stiffness matrix (free DoFs only).
struct SymStiffness {
  std::size_t dim = 0;
  std::vector<BoolPoly> entries;  // row-major dim x dim, symmetric
  DofMap dofs;

  const BoolPoly& at(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
};

/// 4x4 bar stiffness (EA/L scaled direction-cosine blocks) with the area
/// expanded over the element's choice variables. Entries are degree <= 1.
std::array<std::array<BoolPoly, 4>, 4> element_stiffness(const TrussProblem& p, std::size_t e);

/// Scatter-adds all element matrices, then eliminates fixed DoFs.
SymStiffness assemble(const TrussProblem& p);

/// Displacements as one shared-denominator fraction: u_i = num_u[i] / den
/// with den = det(K). Coefficients are divided by a common positive scale to
/// keep magnitudes tame; the ratios are unchanged.
struct SymSolution {
  BoolPoly den;                 // det of the reduced stiffness matrix
  std::vector<BoolPoly> num_u;  // per free DoF (Cramer numerators)
  DofMap dofs;
  double scale = 1.0;  // factor divided out of den and num_u
};

/// Cramer solve with division-free determinant expansion in the multilinear
/// ring. ZeroDeterminantError if det(K) is the identically-zero polynomial.
SymSolution solve_symbolic(const SymStiffness& K, const std::vector<double>& f);

/// Per-element stress sigma_n = S_n / den^2 from the Green-Lagrange strain of
/// the deformed configuration. All elements share the denominator den^2.
std::vector<RationalExpr> stress_expressions(const TrussProblem& p, const SymSolution& sol);

/// The fractional objective F = sum_n (sigma_limit^2 - sigma_n^2)^2 assembled
/// over the common denominator:
///   F = [ sum_n (sigma_limit^2 (den^2)^2 - S_n^2)^2 ] / (den^2)^4.
struct ObjectiveFractional {
  RationalExpr expr;
  double normalization_scale = 1.0;  // positive factor divided out of num and den
};

ObjectiveFractional objective_fractional(const TrussProblem& p,
                                         const std::vector<RationalExpr>& stresses);

/// The reserve-factor difference objective sum_n (sigma_limit^2 sigma_{D,n}^2
/// - sigma_{N,n}^2)^2 as a plain polynomial. It drops the denominator, which
/// is exactly why it picks wrong optima on the larger problems; it is kept to
/// reproduce that behaviour.
struct ObjectiveFlawed {
  BoolPoly poly;
  double normalization_scale = 1.0;
};

ObjectiveFlawed objective_nonfractional_flawed(const TrussProblem& p,
                                               const std::vector<RationalExpr>& stresses);

/// Convenience: assemble, solve, and build both objective kinds.
ObjectiveFractional build_fractional_objective(const TrussProblem& p);
ObjectiveFlawed build_flawed_objective(const TrussProblem& p);

}  // namespace qtruss
