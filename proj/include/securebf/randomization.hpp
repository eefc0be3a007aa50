#pragma once

#include <cstdint>
#include <functional>

#include "securebf/metrics.hpp"

namespace securebf {

/// Covariance solution of a relaxed subproblem, in watts.
struct CovarianceSolution {
  CMat v1;
  CMat v2;
  CMat w;
};

struct RandomizationResult {
  BeamformingSolution solution;
  bool found_feasible = false;
  double best_ssr = 0.0;
};

using ConstraintChecker = std::function<ConstraintCheck(const BeamformingSolution&)>;
using SolutionRepair = std::function<void(BeamformingSolution&)>;

/// Gaussian randomization: draws v ~ CN(0, V) per block, rescales each draw to
/// the block's trace, applies `repair`, and keeps the feasible draw with the
/// best secrecy sum rate. `principal` competes as the first candidate.
RandomizationResult gaussian_randomization(const ChannelSet& ch, const SystemParams& params,
                                           const CovarianceSolution& cov, const BeamformingSolution& principal,
                                           const ConstraintChecker& check, const SolutionRepair& repair,
                                           int rounds = 100, std::uint64_t seed = 0, double rel_slack = 1e-6);

}  // namespace securebf
