#pragma once

#include <optional>
#include <vector>

#include "securebf/sca_common.hpp"

namespace securebf {

/// Scalar gains of a single-antenna instance. h1, h2 are normalized by sigma^2;
/// h12 is the raw relay-link gain so that the relay SNR is P_t * h12 / sigma^2.
struct ScalarGains {
  double h1 = 0.0;
  double h2 = 0.0;
  double h12 = 0.0;
  double gse2 = 0.0;  ///< ||g_se||^2
  double g1e2 = 0.0;  ///< ||g_1e||^2
  double h_s1_raw = 0.0;  ///< |h_s1|^2

  static ScalarGains from(const ChannelSet& ch, const SystemParams& params);
};

struct PowerSplit {
  double rho1 = 0.0;
  double rho2 = 0.0;
};

/// rho1 = gamma_1 / (P_s (1 - beta) h1), rho2 = 1 - rho1. Empty when beta >= 1,
/// the denominator is not positive, or rho1 > 1.
std::optional<PowerSplit> power_split_from_beta(double beta, const SystemParams& params, double h1);

/// Objective of the single-antenna problem in nats:
/// log(1 + P_s (1-beta) h1) - log(1 + (||g_se||^2 P_s + P_t ||g_1e||^2) / (2 sigma^2)).
double power_control_objective(double beta, const ScalarGains& g, const SystemParams& params);

/// Relay transmit power beta * P_s |h_s1|^2 * tau / (1 - tau).
double power_control_relay_power(double beta, const ScalarGains& g, const SystemParams& params);

/// Which constraint is held with equality when deriving rho from beta.
enum class TightBranch { d1_qos, sic, d2_qos };

/// rho1 making the chosen constraint tight at `beta`, if it lies in [0, 1].
std::optional<double> branch_rho1(TightBranch branch, double beta, const ScalarGains& g, const SystemParams& params);

/// Residuals of the single-antenna constraints at (beta, rho1): all >= 0 when
/// feasible. Order: D1 QoS, SIC, D2 QoS.
std::vector<double> power_control_residuals(double beta, double rho1, const ScalarGains& g,
                                            const SystemParams& params);

struct PowerControlState {
  double upsilon = 1.0;  ///< linearization point of the leakage slack (reset to the leakage at the lowest feasible beta)
  double beta = 0.0;
  double rho1 = 0.0;
  double rho2 = 1.0;
  int iteration = 0;
  std::vector<double> objective_trace;  ///< surrogate objective per iteration
};

struct PowerControlResult : SchemeOutcome {
  PowerControlState state;
  double objective = 0.0;  ///< exact objective at the returned point (nats)
  TightBranch branch = TightBranch::d1_qos;
};

/// FOTE loop on the leakage slack with the D1-QoS-tight split, then a coarse
/// beta grid over the other two tight branches; returns the best feasible
/// point. Requires n_s = n_1 = n_2 = 1.
PowerControlResult run_power_control(const ChannelSet& ch, const SystemParams& params, const TraceSink& trace = {});

/// Single-antenna solution with the relay power fully spent on w.
BeamformingSolution power_control_solution(double beta, double rho1, const ChannelSet& ch,
                                           const SystemParams& params);

}  // namespace securebf
