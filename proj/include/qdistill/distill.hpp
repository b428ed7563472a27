#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdistill/hs_geometry.hpp"
#include "qdistill/inseparability.hpp"
#include "qdistill/qstate.hpp"
#include "qdistill/types.hpp"

namespace qdistill {

// Local generalized measurement; elements act on the full pair and satisfy
// sum_i V_i† V_i = I within 1e-10.
struct GeneralizedMeasurement {
  std::vector<Mat4> elements;
};

// Two-outcome partition {w, sqrt(I - w†w)} on the given side; w must be a
// contraction (largest singular value <= 1, else FilterTooLarge).  When
// I - w†w vanishes the measurement collapses to the single element {I ⊗ w}.
GeneralizedMeasurement make_two_outcome(const Mat2& w, Party side);
GeneralizedMeasurement make_two_outcome(const Filter& filter);

// Filter applied to the whole ensemble: post-measurement state of the passing
// branch together with the pass probability.
struct FilterResult {
  DensityMatrix state;
  double pass_probability;
};
FilterResult filter_ensemble(const DensityMatrix& rho, const Filter& filter);

// All branches of a generalized measurement with probabilities and normalized
// post-states; branches below the 1e-14 weight floor are dropped.
struct BranchOutcome {
  int index;
  double probability;
  DensityMatrix state;
};
std::vector<BranchOutcome> measure_branches(const DensityMatrix& rho,
                                            const GeneralizedMeasurement& measurement);

// Repeated filtering of the rejected branch.  Each round re-derives the
// filter from the current rejected state and measures with the Schmidt-scaled
// partition {diag(a,b), diag(b,a)} (full-rank complement, so rejection can
// stay inseparable).  Stops when the rejected branch turns separable, the
// path weight drops below 1e-6, or max_rounds is reached.
struct AcceptedBranch {
  DensityMatrix state;
  double weight;
};
struct RecursiveFilterResult {
  std::vector<AcceptedBranch> accepted;
  int rounds;
  double total_weight;
};
RecursiveFilterResult recursive_filter(const DensityMatrix& rho, int max_rounds);

// Exact bilateral twirl: projects onto the Werner family while preserving the
// singlet overlap <P0| rho |P0>.
DensityMatrix twirl_werner(const DensityMatrix& rho);

// One purification step computed exactly on the 16-dimensional two-pair state:
// twirl both pairs, bilateral CNOT, measure the target pair, post-select on
// agreeing outcomes, twirl the kept pair.  Requires singlet overlap > 1/2
// (FidelityTooLow otherwise; a step below that threshold cannot improve).
struct BbpsswResult {
  DensityMatrix state;
  double f_new;
  double p_success;
};
BbpsswResult bbpssw_step(const DensityMatrix& rho);

// Stage-by-stage record of a distillation run.  pairs_consumed_ratio is the
// expected number of input pairs per surviving output pair for that stage;
// cumulative_efficiency is the running product of its reciprocals.
struct Stage {
  std::string label;
  double fidelity_before;
  double fidelity_after;
  double pass_probability;
  double pairs_consumed_ratio;
};
struct DistillationReport {
  std::vector<Stage> stages;
  std::vector<Vec3r> geometry_trail;
  double cumulative_efficiency;
  bool reached_target;
};

// Pipeline errors carry the partial report so callers can still publish it.
class PipelineError : public Error {
 public:
  PipelineError(ErrorKind kind, const std::string& message, DistillationReport report)
      : Error(kind, message), report(std::move(report)) {}
  DistillationReport report;
};

// Full pipeline: PPT verdict (NotDistillable when separable), witness-aligned
// rotation plus local filter (skipped as identity when the witness is already
// maximally entangled), then purification steps until the fidelity target is
// met (TargetUnreachable when max_steps runs out).  f_target must lie in
// (1/2, 1).
DistillationReport distill_pipeline(const DensityMatrix& rho, double f_target, int max_steps);

// Stochastic pair-level realization of the pipeline.  Pair i draws its filter
// outcome from stream i; purification stage s attempt j draws from stream
// (s << 32) + j, so the result is bit-identical for a fixed seed regardless
// of worker count.
struct EnsembleResult {
  DistillationReport report;
  std::int64_t n_pairs;
  std::int64_t surviving_pairs;
  std::vector<std::int64_t> alive_after_stage;  // one entry per pipeline stage
  double expected_pairs;     // n_pairs * cumulative_efficiency
  double empirical_efficiency;
  double sigma;              // std. dev. of the surviving count under the binomial chain
  bool within_five_sigma;
};
EnsembleResult simulate_ensemble(const DensityMatrix& rho, std::int64_t n_pairs,
                                 double f_target, std::uint64_t seed, int max_steps = 64,
                                 int workers = 1);

// Tomographic round trip: binomial sampling of the 15 product-Pauli
// expectations (shots = 0 means exact), reconstruction with repair.
DensityMatrix estimate_state(const DensityMatrix& rho, std::int64_t shots_per_observable,
                             std::uint64_t seed);

}  // namespace qdistill
