#include "qtruss/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qtruss/solvers.hpp"

namespace qtruss {

PipelineParams default_params(const TrussProblem& p) {
  PipelineParams params;
  params.max_order = int(p.num_elements());
  params.unary_lambda = p.num_elements() >= 4 ? 20.0 : 10.0;
  params.quad_strength = params.unary_lambda;
  return params;
}

void validate(const PipelineParams& params) {
  if (params.max_iters < 1) throw ParamError("max_iters must be positive");
  if (!(params.delta > 0.0)) throw ParamError("delta must be positive");
  if (params.max_order < 2) throw ParamError("max_order must be at least 2");
  if (!(params.c_user > 0.0)) throw ParamError("c_user must be positive");
  if (!(params.c_nl > 0.0)) throw ParamError("c_nl must be positive");
  if (!(params.prec_eps > 0.0)) throw ParamError("prec_eps must be positive");
  if (!(params.unary_lambda > 0.0)) throw ParamError("unary_lambda must be positive");
  if (!(params.quad_strength > 0.0)) throw ParamError("quad_strength must be positive");
}

double QuboModel::energy(const Bits& bits) const {
  double e = offset;
  for (const auto& [v, c] : linear)
    if (bits[v]) e += c;
  for (const auto& [pair, c] : quadratic)
    if (bits[pair.first] && bits[pair.second]) e += c;
  return e;
}

double IsingModel::energy(const std::vector<int>& spins) const {
  double e = offset;
  for (const auto& [v, c] : h) e += c * spins[v];
  for (const auto& [pair, c] : j) e += c * spins[pair.first] * spins[pair.second];
  return e;
}

BoolPoly linear_scale(const BoolPoly& p, double c_user) {
  if (!(c_user > 0.0)) throw ParamError("c_user must be positive");
  const double c_max = max_abs_coeff(p);  // throws on the zero polynomial
  std::vector<Term> out = p.terms();
  for (Term& t : out) t.coeff = (t.coeff / c_max) * c_user;
  return BoolPoly::from_terms(std::move(out));
}

BoolPoly nonlinear_scale(const BoolPoly& p, double c_nl) {
  if (!(c_nl > 0.0)) throw ParamError("c_nl must be positive");
  std::vector<Term> out = p.terms();
  for (Term& t : out) {
    if (t.coeff > 0.0)
      t.coeff = t.coeff / (t.coeff + c_nl);
    else
      t.coeff = -t.coeff / (t.coeff - c_nl);
  }
  return BoolPoly::from_terms(std::move(out));
}

BoolPoly unary_constraint(const std::vector<VarId>& element_vars, double lambda) {
  if (element_vars.size() < 2) throw ParamError("unary constraint needs at least two choices");
  if (!(lambda > 0.0)) throw ParamError("lambda must be positive");
  std::vector<Term> terms;
  for (std::size_t i = 0; i < element_vars.size(); ++i) {
    terms.push_back({Monomial::single(element_vars[i]), -lambda});
    for (std::size_t j = i + 1; j < element_vars.size(); ++j)
      terms.push_back({Monomial::of({element_vars[i], element_vars[j]}), 2.0 * lambda});
  }
  return BoolPoly::from_terms(std::move(terms));
}

QuboModel quadratize(const BoolPoly& p, std::uint32_t num_vars, double strength) {
  if (!(strength > 0.0)) throw ParamError("quadratization strength must be positive");

  QuboModel model;
  model.num_original = num_vars;
  model.num_vars = num_vars;

  std::vector<Term> work(p.terms().begin(), p.terms().end());
  std::vector<Term> penalties;

  while (true) {
    // Count pair occurrences among monomials of degree >= 3.
    std::map<std::pair<VarId, VarId>, std::size_t> pair_count;
    for (const Term& t : work) {
      if (t.mono.degree() < 3) continue;
      const std::vector<VarId> vars = t.mono.vars();
      for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j) ++pair_count[{vars[i], vars[j]}];
    }
    if (pair_count.empty()) break;

    std::pair<VarId, VarId> best = pair_count.begin()->first;
    std::size_t best_count = pair_count.begin()->second;
    for (const auto& [pair, count] : pair_count) {
      if (count > best_count) {  // ties keep the smallest pair (map order)
        best = pair;
        best_count = count;
      }
    }

    const VarId aux = model.num_vars++;
    model.aux_registry.push_back({aux, best});
    for (Term& t : work) {
      if (t.mono.degree() >= 3 && t.mono.contains(best.first) && t.mono.contains(best.second))
        t.mono = t.mono.without(best.first).without(best.second).with(aux);
    }
    // Rosenberg penalty: strength * (q_i q_j - 2 q_i y - 2 q_j y + 3 y).
    penalties.push_back({Monomial::of({best.first, best.second}), strength});
    penalties.push_back({Monomial::of({best.first, aux}), -2.0 * strength});
    penalties.push_back({Monomial::of({best.second, aux}), -2.0 * strength});
    penalties.push_back({Monomial::single(aux), 3.0 * strength});

    // Substitution may have merged monomials; renormalize.
    work.insert(work.end(), penalties.begin(), penalties.end());
    penalties.clear();
    const BoolPoly merged = BoolPoly::from_terms(std::move(work));
    work.assign(merged.terms().begin(), merged.terms().end());
  }

  const BoolPoly quadratic = BoolPoly::from_terms(std::move(work));
  for (const Term& t : quadratic.terms()) {
    const int d = t.mono.degree();
    if (d == 0) {
      model.offset += t.coeff;
    } else if (d == 1) {
      model.linear[t.mono.vars()[0]] += t.coeff;
    } else {
      const auto vars = t.mono.vars();
      model.quadratic[{vars[0], vars[1]}] += t.coeff;
    }
  }
  return model;
}

QuboModel process_objective(const BoolPoly& nf, const BlockStructure& blocks,
                            const PipelineParams& params) {
  validate(params);
  BoolPoly p = truncate_above_order(nf, params.max_order);
  if (!p.is_zero()) {
    p = linear_scale(p, params.c_user);
    p = nonlinear_scale(p, params.c_nl);
    p = truncate_below_magnitude(p, params.prec_eps);
  }
  for (std::size_t n = 0; n < blocks.num_elements; ++n) {
    std::vector<VarId> vars;
    for (std::size_t c = 0; c < blocks.num_choices; ++c)
      vars.push_back(VarId(n * blocks.num_choices + c));
    p = add(p, unary_constraint(vars, params.unary_lambda));
  }
  const std::uint32_t num_vars =
      blocks.num_vars() > 0
          ? std::uint32_t(blocks.num_vars())
          : (nf.is_zero() ? 0 : std::uint32_t(nf.support().is_constant() ? 0 : nf.support().max_var() + 1));
  return quadratize(p, num_vars, params.quad_strength);
}

QuboModel process_objective(const BoolPoly& nf, const TrussProblem& p,
                            const PipelineParams& params) {
  return process_objective(nf, blocks_of(p), params);
}

IsingModel qubo_to_ising(const QuboModel& q) {
  IsingModel ising;
  ising.num_vars = q.num_vars;
  ising.offset = q.offset;
  for (const auto& [v, c] : q.linear) {
    ising.h[v] += c / 2.0;
    ising.offset += c / 2.0;
  }
  for (const auto& [pair, c] : q.quadratic) {
    ising.j[pair] += c / 4.0;
    ising.h[pair.first] += c / 4.0;
    ising.h[pair.second] += c / 4.0;
    ising.offset += c / 4.0;
  }
  std::erase_if(ising.h, [](const auto& kv) { return kv.second == 0.0; });
  std::erase_if(ising.j, [](const auto& kv) { return kv.second == 0.0; });
  return ising;
}

namespace {

BoolPoly iteration_polynomial(const RationalExpr& objective, double lambda) {
  return sub(objective.num, scaled(objective.den, lambda));
}

}  // namespace

SolveReport dinkelbach_solve(const RationalExpr& objective, const BlockStructure& blocks,
                             Sampler& sampler, const PipelineParams& params,
                             const SamplerParams& sampler_params) {
  validate(params);
  SolveReport report;
  report.rng_seed = sampler_params.seed;

  double lambda = 0.0;
  std::optional<Assignment> best_valid;
  double best_valid_value = 0.0;

  for (int iter = 1; iter <= params.max_iters; ++iter) {
    IterationRecord rec;
    rec.iter = iter;
    rec.lambda_in = lambda;

    const BoolPoly nf = iteration_polynomial(objective, lambda);
    rec.stats.terms_input = nf.term_count();
    const QuboModel qubo = process_objective(nf, blocks, params);
    rec.stats.qubo_vars = qubo.num_vars;
    rec.stats.aux_vars = std::uint32_t(qubo.aux_registry.size());

    SamplerParams iter_params = sampler_params;
    iter_params.seed = mix_seed(sampler_params.seed + std::uint64_t(iter));
    const std::vector<Sample> samples = sampler.sample(qubo, iter_params);
    if (samples.empty()) throw SamplerFailureError("sampler returned no samples");

    const Sample& best = samples.front();
    rec.best_qubo_assignment = best.assignment;
    rec.best_energy = best.energy;
    const DecodedSample decoded = decode_sample(best, qubo, blocks);
    rec.decoded = decoded.assignment;
    rec.sample_valid = decoded.valid;

    if (decoded.valid) {
      const double value = objective.evaluate(decoded.assignment);
      rec.lambda_out = value;
      if (!best_valid || value < best_valid_value) {
        best_valid = decoded.assignment;
        best_valid_value = value;
      }
      report.iterations.push_back(rec);
      if (std::abs(value - lambda) <= params.delta) {
        report.converged = true;
        report.final_assignment = decoded.assignment;
        report.final_objective_value = value;
        return report;
      }
      lambda = value;
    } else {
      // The fraction may be undefined at invalid points (singular stiffness),
      // so lambda stays put and the iteration still counts.
      rec.lambda_out = lambda;
      report.iterations.push_back(rec);
    }
  }

  if (!best_valid)
    throw AllIterationsInvalidError("no iteration produced a valid best sample");
  report.converged = false;
  report.final_assignment = *best_valid;
  report.final_objective_value = best_valid_value;
  return report;
}

SolveReport dinkelbach_solve(const ObjectiveFractional& objective, const TrussProblem& p,
                             Sampler& sampler, const PipelineParams& params,
                             const SamplerParams& sampler_params) {
  return dinkelbach_solve(objective.expr, blocks_of(p), sampler, params, sampler_params);
}

}  // namespace qtruss
