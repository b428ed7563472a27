#include "qdistill/distill.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

#include "qdistill/rng.hpp"

namespace qdistill {

namespace {

Mat4 embed(const Mat2& w, Party side) {
  return side == Party::B ? kron(Mat2::Identity(), w) : kron(w, Mat2::Identity());
}

void run_chunked(std::int64_t count, int workers, const std::function<void(std::int64_t, std::int64_t)>& body) {
  if (workers <= 1 || count < 2) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  std::int64_t chunk = (count + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    std::int64_t lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

GeneralizedMeasurement make_two_outcome(const Mat2& w, Party side) {
  double top = svd2c(w).s(0);
  if (top > 1 + kTolParam) {
    std::ostringstream msg;
    msg << "make_two_outcome: largest singular value " << top << " exceeds 1";
    throw Error(ErrorKind::FilterTooLarge, msg.str());
  }
  Mat2 complement_sq = Mat2::Identity() - w.adjoint() * w;
  complement_sq = (complement_sq + complement_sq.adjoint()) / 2.0;
  GeneralizedMeasurement m;
  m.elements.push_back(embed(w, side));
  if (complement_sq.cwiseAbs().maxCoeff() > 1e-12) m.elements.push_back(embed(sqrt_psd(complement_sq), side));
  return m;
}

GeneralizedMeasurement make_two_outcome(const Filter& filter) {
  return make_two_outcome(filter.w, filter.side);
}

FilterResult filter_ensemble(const DensityMatrix& rho, const Filter& filter) {
  LocalResult res = filter.side == Party::B ? apply_local(rho, Mat2::Identity(), filter.w)
                                            : apply_local(rho, filter.w, Mat2::Identity());
  return {res.state, res.weight};
}

std::vector<BranchOutcome> measure_branches(const DensityMatrix& rho,
                                            const GeneralizedMeasurement& measurement) {
  std::vector<BranchOutcome> branches;
  for (int i = 0; i < static_cast<int>(measurement.elements.size()); ++i) {
    const Mat4& v = measurement.elements[i];
    Mat4 mapped = v * rho.matrix() * v.adjoint();
    double p = mapped.trace().real();
    if (p <= kZeroWeight) continue;
    Mat4 normalized = mapped / p;
    branches.push_back({i, p, make_density((normalized + normalized.adjoint()) / 2.0)});
  }
  return branches;
}

RecursiveFilterResult recursive_filter(const DensityMatrix& rho, int max_rounds) {
  if (max_rounds < 1) throw Error(ErrorKind::BadParameter, "recursive_filter: max_rounds must be >= 1");
  RecursiveFilterResult result{{}, 0, 0.0};
  DensityMatrix current = rho;
  double path_weight = 1.0;
  for (int round = 0; round < max_rounds; ++round) {
    if (!ppt_test(current).inseparable) break;
    FilterDerivation der = derive_filter(current);
    // Schmidt-scaled partition {diag(a,b), diag(b,a)}: unlike the
    // spectral-norm-1 filter, its complement has full rank, so the rejected
    // branch can stay inseparable and feed another round.
    Mat2 w = Mat2::Zero();
    w(0, 0) = der.schmidt.a;
    w(1, 1) = der.schmidt.b;
    std::vector<BranchOutcome> branches = measure_branches(der.rotated, make_two_outcome(w, Party::B));
    result.rounds = round + 1;
    if (!branches.empty() && branches.front().index == 0)
      result.accepted.push_back({branches.front().state, path_weight * branches.front().probability});
    if (branches.size() < 2) break;
    path_weight *= branches.back().probability;
    if (path_weight < kMinBranchWeight) break;
    current = branches.back().state;
  }
  for (const AcceptedBranch& b : result.accepted) result.total_weight += b.weight;
  return result;
}

DensityMatrix twirl_werner(const DensityMatrix& rho) {
  Vec4 singlet = bell_state(Bell::PsiMinus);
  double f = singlet.dot(rho.matrix() * singlet).real();
  return werner_state(std::clamp(f, 0.0, 1.0));
}

namespace {

using Mat16 = Eigen::Matrix<Complex, 16, 16>;

Mat16 kron44(const Mat4& a, const Mat4& b) {
  Mat16 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return out;
}

// Basis index bits are (A1, B1, A2, B2) from most to least significant.
// Alice applies CNOT A1 -> A2, Bob applies CNOT B1 -> B2.
int bilateral_cnot_image(int g) {
  int a1 = (g >> 3) & 1, b1 = (g >> 2) & 1, a2 = (g >> 1) & 1, b2 = g & 1;
  return (a1 << 3) | (b1 << 2) | ((a2 ^ a1) << 1) | (b2 ^ b1);
}

}  // namespace

BbpsswResult bbpssw_step(const DensityMatrix& rho) {
  Vec4 singlet = bell_state(Bell::PsiMinus);
  double f0 = singlet.dot(rho.matrix() * singlet).real();
  if (f0 <= 0.5) {
    std::ostringstream msg;
    msg << "bbpssw_step: singlet overlap " << f0 << " is not above 1/2, a step cannot improve";
    throw Error(ErrorKind::FidelityTooLow, msg.str());
  }

  // Work in the Phi+ convention (fixed local rotation sigma_y on party B maps
  // the singlet there); both pairs are twirled to Werner form first.
  Vec4 phi = bell_state(Bell::PhiPlus);
  Mat4 phi_proj = phi * phi.adjoint();
  Mat4 pair = f0 * phi_proj + (1 - f0) / 3.0 * (Mat4::Identity() - phi_proj);

  Mat16 both = kron44(pair, pair);
  Mat16 evolved;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) evolved(bilateral_cnot_image(i), bilateral_cnot_image(j)) = both(i, j);

  // Measure the target pair (A2, B2) in the computational basis and keep only
  // agreeing outcomes 00 and 11; trace the target pair out.
  Mat4 kept = Mat4::Zero();
  for (int outcome : {0, 3})
    for (int p1 = 0; p1 < 4; ++p1)
      for (int p1b = 0; p1b < 4; ++p1b) kept(p1, p1b) += evolved(4 * p1 + outcome, 4 * p1b + outcome);

  double p_success = kept.trace().real();
  kept /= p_success;
  double f_new = phi.dot(kept * phi).real();
  return {werner_state(std::clamp(f_new, 0.0, 1.0)), f_new, p_success};
}

DistillationReport distill_pipeline(const DensityMatrix& rho, double f_target, int max_steps) {
  if (!(f_target > 0.5) || !(f_target < 1))
    throw Error(ErrorKind::BadParameter, "distill_pipeline: f_target must lie in (1/2, 1)");
  if (max_steps < 0) throw Error(ErrorKind::BadParameter, "distill_pipeline: max_steps must be >= 0");

  DistillationReport report{{}, {}, 0.0, false};
  report.geometry_trail.push_back(diagonalize_t(rho).d);

  PptVerdict verdict = ppt_test(rho);
  if (!verdict.inseparable) {
    std::ostringstream msg;
    msg << "distill_pipeline: min partial-transpose eigenvalue " << verdict.min_eigenvalue
        << " is not below -" << kTolSeparable << ", state is not distillable";
    throw PipelineError(ErrorKind::NotDistillable, msg.str(), report);
  }

  double f_before = singlet_fraction(rho).f;
  FilterDerivation der = derive_filter(rho);
  DensityMatrix state = der.rotated;
  double p_pass = 1.0;
  if (!filter_is_identity(der)) {
    FilterResult filtered = filter_ensemble(der.rotated, der.filter);
    state = filtered.state;
    p_pass = filtered.pass_probability;
  }
  double fidelity = singlet_fraction(state).f;
  report.stages.push_back({"filter", f_before, fidelity, p_pass, 1.0 / p_pass});
  report.cumulative_efficiency = p_pass;
  report.geometry_trail.push_back(diagonalize_t(state).d);

  int steps = 0;
  while (fidelity < f_target) {
    if (steps == max_steps) {
      std::ostringstream msg;
      msg << "distill_pipeline: fidelity " << fidelity << " below target " << f_target << " after "
          << steps << " purification steps";
      throw PipelineError(ErrorKind::TargetUnreachable, msg.str(), report);
    }
    BbpsswResult step = bbpssw_step(state);
    report.stages.push_back(
        {"bbpssw", fidelity, step.f_new, step.p_success, 2.0 / step.p_success});
    report.cumulative_efficiency *= step.p_success / 2.0;
    state = step.state;
    fidelity = step.f_new;
    report.geometry_trail.push_back(diagonalize_t(state).d);
    ++steps;
  }
  report.reached_target = true;
  return report;
}

EnsembleResult simulate_ensemble(const DensityMatrix& rho, std::int64_t n_pairs, double f_target,
                                 std::uint64_t seed, int max_steps, int workers) {
  if (n_pairs < 2) throw Error(ErrorKind::BadParameter, "simulate_ensemble: n_pairs must be >= 2");
  if (n_pairs >= (std::int64_t{1} << 32))
    throw Error(ErrorKind::BadParameter, "simulate_ensemble: n_pairs must fit in 32 bits");
  if (workers < 1) throw Error(ErrorKind::BadParameter, "simulate_ensemble: workers must be >= 1");

  DistillationReport report = distill_pipeline(rho, f_target, max_steps);
  double p_filter = report.stages.front().pass_probability;

  // Stage probabilities drive a binomial chain; each pair/attempt owns a
  // dedicated RNG stream so the outcome is worker-count independent.
  std::vector<std::uint8_t> alive(static_cast<std::size_t>(n_pairs));
  run_chunked(n_pairs, workers, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i)
      alive[static_cast<std::size_t>(i)] = Rng(seed, static_cast<std::uint64_t>(i)).bernoulli(p_filter);
  });
  std::vector<std::int64_t> alive_after_stage;
  alive_after_stage.push_back(std::accumulate(alive.begin(), alive.end(), std::int64_t{0}));

  double mean = static_cast<double>(n_pairs) * p_filter;
  double var = static_cast<double>(n_pairs) * p_filter * (1 - p_filter);

  for (std::size_t s = 1; s < report.stages.size(); ++s) {
    double q = report.stages[s].pass_probability;
    std::vector<std::int64_t> idx;
    idx.reserve(alive.size());
    for (std::int64_t i = 0; i < n_pairs; ++i)
      if (alive[static_cast<std::size_t>(i)]) idx.push_back(i);
    std::int64_t attempts = static_cast<std::int64_t>(idx.size()) / 2;
    run_chunked(attempts, workers, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t j = lo; j < hi; ++j) {
        std::uint64_t stream = (static_cast<std::uint64_t>(s) << 32) + static_cast<std::uint64_t>(j);
        bool success = Rng(seed, stream).bernoulli(q);
        alive[static_cast<std::size_t>(idx[2 * j + 1])] = 0;  // partner always consumed
        if (!success) alive[static_cast<std::size_t>(idx[2 * j])] = 0;
      }
    });
    if (idx.size() % 2 == 1) alive[static_cast<std::size_t>(idx.back())] = 0;  // unpaired leftover
    alive_after_stage.push_back(std::accumulate(alive.begin(), alive.end(), std::int64_t{0}));
    var = (q / 2) * (q / 2) * var + (mean / 2) * q * (1 - q);
    mean = (mean / 2) * q;
  }

  EnsembleResult result;
  result.report = report;
  result.n_pairs = n_pairs;
  result.alive_after_stage = std::move(alive_after_stage);
  result.surviving_pairs = std::accumulate(alive.begin(), alive.end(), std::int64_t{0});
  result.expected_pairs = static_cast<double>(n_pairs) * report.cumulative_efficiency;
  result.empirical_efficiency = static_cast<double>(result.surviving_pairs) / static_cast<double>(n_pairs);
  result.sigma = std::sqrt(std::max(var, 0.0));
  result.within_five_sigma =
      std::abs(static_cast<double>(result.surviving_pairs) - result.expected_pairs) <= 5 * result.sigma;
  return result;
}

DensityMatrix estimate_state(const DensityMatrix& rho, std::int64_t shots_per_observable,
                             std::uint64_t seed) {
  if (shots_per_observable < 0)
    throw Error(ErrorKind::BadParameter, "estimate_state: shots_per_observable must be >= 0");
  HsForm truth = decompose(rho);
  if (shots_per_observable == 0) return reconstruct(truth);  // exact sentinel

  // Observables are indexed r(0..2), s(3..5), t row-major (6..14); each draws
  // from its own stream.
  auto sample = [&](int obs_index, double expectation) {
    Rng rng(seed, static_cast<std::uint64_t>(obs_index));
    double p_up = (1 + expectation) / 2;
    std::int64_t ups = 0;
    for (std::int64_t k = 0; k < shots_per_observable; ++k) ups += rng.bernoulli(p_up);
    return 2.0 * static_cast<double>(ups) / static_cast<double>(shots_per_observable) - 1.0;
  };

  HsForm est;
  for (int n = 0; n < 3; ++n) {
    est.r(n) = sample(n, truth.r(n));
    est.s(n) = sample(3 + n, truth.s(n));
    for (int m = 0; m < 3; ++m) est.t(n, m) = sample(6 + 3 * n + m, truth.t(n, m));
  }
  return reconstruct(est, /*repair=*/true);
}

}  // namespace qdistill
