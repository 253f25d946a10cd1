#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qtruss/boolpoly.hpp"
#include "qtruss/pipeline.hpp"
#include "qtruss/truss.hpp"

namespace qtruss {

/// One sampled QUBO assignment. The energy is recomputed from the model, not
/// trusted from the producer.
struct Sample {
  Bits assignment;  // over all QUBO variables (originals then auxiliaries)
  double energy = 0.0;
  std::uint64_t occurrences = 1;
};

struct SamplerParams {
  std::uint64_t num_reads = 256;
  std::uint64_t sweeps_per_read = 1000;
  double beta_start = 0.1;
  double beta_end = 10.0;
  std::uint64_t seed = 0;
};

void validate(const SamplerParams& params);

/// Minimization backends speak one contract: samples sorted by energy, ties
/// by lexicographically smallest bitstring, deterministic given the seed.
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual std::vector<Sample> sample(const QuboModel& q, const SamplerParams& params) = 0;
};

// --- Exhaustive search --------------------------------------------------------

/// One landscape point of a brute-force sweep over the valid assignments.
struct LandscapePoint {
  std::uint64_t solution_index = 0;
  Assignment assignment;
  double value = 0.0;
};

struct Landscape {
  std::vector<LandscapePoint> points;  // in solution_index order
  std::size_t argmin_pos = 0;          // position of the minimum (ties: lowest index)

  const LandscapePoint& argmin() const { return points[argmin_pos]; }
};

/// Evaluates the objective at all C^N valid assignments in solution_index
/// order. SingularPointError if a fractional objective's denominator
/// vanishes at a valid assignment.
Landscape brute_force_valid(const RationalExpr& objective, const TrussProblem& p);
Landscape brute_force_valid(const BoolPoly& objective, const TrussProblem& p);

struct BruteForceResult {
  Bits assignment;
  double energy = 0.0;
};

/// Exact minimum over all 2^V assignments of a QUBO (Gray-code enumeration,
/// OpenMP over index ranges). TooManyVariablesError above max_vars.
BruteForceResult brute_force_qubo(const QuboModel& q, std::uint32_t max_vars = 24);
/// Naive full-reevaluation reference, kept for tests and the benchmark tool.
BruteForceResult brute_force_qubo_serial(const QuboModel& q, std::uint32_t max_vars = 24);

// --- Simulated annealing -------------------------------------------------------

/// num_reads independent restarts of single-spin-flip Metropolis sweeps over
/// a geometric inverse-temperature schedule beta_start -> beta_end. Read r
/// derives its generator from seed + r, so the merged, energy-sorted sample
/// list is identical however the reads are scheduled.
std::vector<Sample> simulated_anneal(const QuboModel& q, const SamplerParams& params);
/// Same computation without the OpenMP loop; bit-identical results.
std::vector<Sample> simulated_anneal_serial(const QuboModel& q, const SamplerParams& params);

class SimulatedAnnealingSampler final : public Sampler {
 public:
  std::vector<Sample> sample(const QuboModel& q, const SamplerParams& params) override {
    return simulated_anneal(q, params);
  }
};

/// Exact inner solver: enumerates assignments of the original variables,
/// completes auxiliaries consistently with their product definitions, and
/// returns the best sample. With an adequate quadratization strength this is
/// the exact QUBO minimum. Restricting to valid one-hot assignments gives
/// the oracle used by the convergence tests.
class ExhaustiveSampler final : public Sampler {
 public:
  explicit ExhaustiveSampler(BlockStructure blocks = {}, bool valid_only = false)
      : blocks_(blocks), valid_only_(valid_only) {}
  std::vector<Sample> sample(const QuboModel& q, const SamplerParams& params) override;

 private:
  BlockStructure blocks_;
  bool valid_only_ = false;
};

// --- Decoding -------------------------------------------------------------------

struct DecodedSample {
  Assignment assignment;      // original variables only
  bool valid = false;         // one-hot per element block
  bool aux_consistent = true; // every auxiliary equals its product
};

/// Projects the auxiliaries out of a sample and checks block validity plus
/// auxiliary consistency (the chain-break analog of the penalty method).
DecodedSample decode_sample(const Sample& s, const QuboModel& q, const BlockStructure& blocks);

/// Completes an assignment of the original variables with auxiliaries set to
/// the products they stand for.
Bits complete_with_aux(const Bits& original, const QuboModel& q);

/// splitmix64; used to derive per-read and per-iteration seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace qtruss
