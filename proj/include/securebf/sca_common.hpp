#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "securebf/channel_model.hpp"
#include "securebf/conic.hpp"
#include "securebf/linalg.hpp"
#include "securebf/metrics.hpp"

namespace securebf {

/// Channel Gram matrices rescaled so subproblem entries are SINR-sized.
/// Beamformer covariances enter as V = P_s * Vhat and relay covariances as
/// W = w_scale * What, so a_jk = Tr(A_j Vhat_k) is the SINR contribution of
/// stream k at device j.
struct Normalized {
  double w_scale = 0.0;  ///< P_s * lambda_max(H_s1^H H_s1), an upper bound on harvested power
  double kappa_w = 0.0;  ///< w_scale / sigma^2
  double c_tau = 1.0;    ///< tau / (1 - tau)
  CMat a1;   ///< (P_s/sigma^2) H_s1^H H_s1
  CMat a2;   ///< (P_s/sigma^2) H_s2^H H_s2
  CMat b12;  ///< (w_scale/sigma^2) H_12^H H_12

  static Normalized from(const ChannelSet& ch, const SystemParams& params);
};

using TraceSink = std::function<void(const nlohmann::json&)>;

struct RankRatios {
  double v1 = 0.0;
  double v2 = 0.0;
  double w = 0.0;
  double worst() const;
};

/// Common outcome of the iterative schemes.
struct SchemeOutcome {
  bool feasible = false;
  bool converged = false;       ///< stopping rule met before the iteration cap
  bool restored = false;        ///< initial point needed the feasibility phase
  conic::Status status = conic::Status::numerical_failure;  ///< last subproblem status
  int iterations = 0;
  double solve_ms = 0.0;
  BeamformingSolution solution;
  RankRatios ranks;
  conic::Solution certificate;  ///< subproblem solution that decided infeasibility
  std::string message;
};

/// Tangent of x^2 at x0: 2 x0 x - x0^2 (a global minorant).
inline conic::LinExpr square_minorant(double x0, const conic::LinExpr& x) { return 2.0 * x0 * x - x0 * x0; }

/// Principal factor of a normalized covariance; blocks whose trace is at
/// interior-point noise level (<= 1e-6) come back as zero with ratio 0.
RankOne extract_principal(const CMat& normalized);

/// Solver settings used by every scheme subproblem.
conic::SolverSettings subproblem_settings();

}  // namespace securebf
