#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtruss/boolpoly.hpp"
#include "qtruss/symfem.hpp"
#include "qtruss/truss.hpp"

namespace qtruss {

/// Knobs of the objective-processing passes and the iterative solve.
struct PipelineParams {
  int max_iters = 15;
  double delta = 1e-6;        // convergence threshold on |lambda_out - lambda_in|
  int max_order = 2;          // highest monomial order kept (number of elements)
  double c_user = 1.0;        // linear scaling target magnitude
  double c_nl = 0.1;          // non-linear scaling strength
  double prec_eps = 1e-8;     // precision truncation magnitude
  double unary_lambda = 10.0; // one-hot constraint strength
  double quad_strength = 10.0;
};

/// Defaults per benchmark size: max_order = N; constraint and quadratization
/// strength 10 for up to three elements, 20 beyond.
PipelineParams default_params(const TrussProblem& p);

void validate(const PipelineParams& params);

/// One-hot block structure of the original variables: num_elements blocks of
/// num_choices variables each. Zero blocks means "no validity constraint"
/// (used for generic fractional programs).
struct BlockStructure {
  std::size_t num_elements = 0;
  std::size_t num_choices = 0;
  std::size_t num_vars() const { return num_elements * num_choices; }
};

inline BlockStructure blocks_of(const TrussProblem& p) {
  return {p.num_elements(), p.num_choices()};
}

/// Quadratic model over original + auxiliary boolean variables. Auxiliary
/// variables get ids starting at num_original; aux_registry records which
/// product each one replaces.
struct QuboModel {
  std::uint32_t num_original = 0;
  std::uint32_t num_vars = 0;
  std::map<VarId, double> linear;
  std::map<std::pair<VarId, VarId>, double> quadratic;  // keys i < j
  double offset = 0.0;
  std::vector<std::pair<VarId, std::pair<VarId, VarId>>> aux_registry;

  double energy(const Bits& bits) const;
};

/// Ising form of a QUBO under x = (s+1)/2.
struct IsingModel {
  std::uint32_t num_vars = 0;
  std::map<VarId, double> h;
  std::map<std::pair<VarId, VarId>, double> j;
  double offset = 0.0;

  /// Energy at spins -1/+1.
  double energy(const std::vector<int>& spins) const;
};

// --- Processing passes -------------------------------------------------------

/// Multiplies every coefficient by c_user/max_abs_coeff(p) so the largest
/// magnitude becomes exactly c_user. Preserves the ordering of assignment
/// values. EmptyPolynomialError on the zero polynomial.
BoolPoly linear_scale(const BoolPoly& p, double c_user);

/// Per-coefficient saturation that amplifies small magnitudes:
/// c > 0 -> c/(c + c_nl), c < 0 -> -c/(c - c_nl). Odd and increasing in c,
/// but applied coefficient-wise, so the argmin may move.
BoolPoly nonlinear_scale(const BoolPoly& p, double c_nl);

/// One-hot penalty for one block, constant term dropped:
/// lambda * (2 sum_{c<c'} q_c q_c' - sum_c q_c); value lambda*(k^2 - 2k) at
/// Hamming weight k, minimal at k = 1.
BoolPoly unary_constraint(const std::vector<VarId>& element_vars, double lambda);

/// Rosenberg reduction: repeatedly replaces the variable pair occurring in
/// the most monomials of degree >= 3 by a fresh auxiliary y, adding
/// strength*(q_i q_j - 2 q_i y - 2 q_j y + 3 y), until the polynomial is
/// quadratic. Ties pick the smallest pair (i, j). num_vars is the number of
/// original variables (>= all referenced ids).
QuboModel quadratize(const BoolPoly& p, std::uint32_t num_vars, double strength);

/// The full pass sequence applied to one iteration's non-fractional
/// polynomial: order truncation, linear scaling, non-linear scaling,
/// precision truncation, per-element one-hot constraints, quadratization.
QuboModel process_objective(const BoolPoly& nf, const BlockStructure& blocks,
                            const PipelineParams& params);
QuboModel process_objective(const BoolPoly& nf, const TrussProblem& p,
                            const PipelineParams& params);

IsingModel qubo_to_ising(const QuboModel& q);

// --- Iterative fractional solve ----------------------------------------------

struct Sample;         // solvers.hpp
class Sampler;         // solvers.hpp
struct SamplerParams;  // solvers.hpp

struct PolyStats {
  std::size_t terms_input = 0;
  std::size_t terms_processed = 0;  // before quadratization, after constraints
  int degree_processed = 0;
  std::uint32_t qubo_vars = 0;
  std::uint32_t aux_vars = 0;
};

struct IterationRecord {
  int iter = 0;
  double lambda_in = 0.0;
  PolyStats stats;
  Bits best_qubo_assignment;
  double best_energy = 0.0;
  Assignment decoded;  // original variables only
  bool sample_valid = false;
  double lambda_out = 0.0;
};

struct SolveReport {
  std::vector<IterationRecord> iterations;
  bool converged = false;
  Assignment final_assignment;
  double final_objective_value = 0.0;
  std::uint64_t rng_seed = 0;
};

/// Iterative non-fractional scheme for min num/den: start at lambda = 0,
/// repeatedly minimize num - lambda*den (processed to a QUBO and sampled),
/// and update lambda to the fraction's value at the decoded assignment when
/// it is valid. Stops when |lambda_out - lambda_in| <= delta or after
/// max_iters iterations. AllIterationsInvalidError if no iteration ever
/// produced a valid best sample.
SolveReport dinkelbach_solve(const RationalExpr& objective, const BlockStructure& blocks,
                             Sampler& sampler, const PipelineParams& params,
                             const SamplerParams& sampler_params);
SolveReport dinkelbach_solve(const ObjectiveFractional& objective, const TrussProblem& p,
                             Sampler& sampler, const PipelineParams& params,
                             const SamplerParams& sampler_params);

}  // namespace qtruss
