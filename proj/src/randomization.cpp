#include "securebf/randomization.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "securebf/rng.hpp"

namespace securebf {

namespace {

struct Sampler {
  CMat factor;  // V = factor * factor^H
  double trace = 0.0;

  explicit Sampler(const CMat& v) {
    const CMat h = 0.5 * (v + v.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const RVec ev = es.eigenvalues().cwiseMax(0.0);
    factor = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
    trace = ev.sum();
  }

  CVec draw(CounterRng& rng) const {
    const int n = static_cast<int>(factor.rows());
    CVec z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.complex_normal();
    CVec v = factor * z;
    const double nv = v.norm();
    if (nv > 0.0) v *= std::sqrt(trace) / nv;
    return v;
  }
};

}  // namespace

RandomizationResult gaussian_randomization(const ChannelSet& ch, const SystemParams& params,
                                           const CovarianceSolution& cov, const BeamformingSolution& principal,
                                           const ConstraintChecker& check, const SolutionRepair& repair, int rounds,
                                           std::uint64_t seed, double rel_slack) {
  RandomizationResult out;
  out.solution = principal;
  auto consider = [&](const BeamformingSolution& cand) {
    if (!check(cand).satisfied(rel_slack)) return;
    const double ssr = secrecy_sum_rate(ch, cand, params).ssr;
    if (!out.found_feasible || ssr > out.best_ssr) {
      out.found_feasible = true;
      out.best_ssr = ssr;
      out.solution = cand;
    }
  };
  consider(principal);
  const Sampler s1(cov.v1), s2(cov.v2), sw(cov.w);
  CounterRng rng(CounterRng::derive_key(seed, 0x5241u), 0);
  for (int r = 0; r < rounds; ++r) {
    BeamformingSolution cand = principal;
    cand.v1 = s1.draw(rng);
    cand.v2 = s2.draw(rng);
    cand.w = sw.draw(rng);
    if (repair) repair(cand);
    consider(cand);
  }
  out.solution.randomized = true;
  return out;
}

}  // namespace securebf
