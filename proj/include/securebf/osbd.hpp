#pragma once

#include <vector>

#include "securebf/conic.hpp"
#include "securebf/linalg.hpp"
#include "securebf/sca_common.hpp"

namespace securebf {

/// Linearization points of the active-eavesdropper SCA loop. Rates are in
/// nats without the 1/2 factor; mu1, mu2 and tau_s are logs of the SINR
/// factors, so exp(.) of each is the tangent point of the log minorants.
struct OsbdState {
  double tau_s = 1.0;    ///< leakage slack (tau is also the time fraction)
  double mu1 = 1.0;      ///< D1 rate slack
  double mu2 = 0.0;      ///< D2 rate slack
  double varphi2 = 1.0;  ///< relay-power epigraph point
  double phi2 = 1.0;     ///< sqrt of the normalized leakage at the last point
  double xi = 1.0;       ///< D1 rate epigraph point
  double phi1 = 1.0;     ///< SIC epigraph point
  double omega1 = 1.0;   ///< QoS epigraph point
  double eta = 1.0;      ///< AGM weight
  int iteration = 0;
  std::vector<double> objective_trace;  ///< R = mu1 + mu2 - tau_s per iteration
  double r_prev = 0.0;                  ///< R_0
};

struct OsbdOptions {
  bool relay = true;  ///< false: direct link only (beta = 0, w = 0)
  bool feasibility_phase = false;  ///< minimize slack on the linearized rows instead
  double feasibility_margin = 1e-6;
};

/// Handles into the emitted program.
struct OsbdProgram {
  conic::Program program;
  conic::HermitianBlock v1, v2;
  conic::HermitianBlock x;  ///< reduced relay covariance (absent without relay or in fixed-direction mode)
  int alpha = -1;           ///< fixed-direction scale: X = alpha * I
  std::vector<int> feasibility_slacks;  ///< only in the feasibility phase
  int beta = -1;
  int t1 = -1, t2 = -1, te = -1;
  int mu1 = -1, mu2 = -1, tau_s = -1;
  int xi = -1, phi1 = -1, omega1 = -1, varphi2 = -1;
  bool relay = true;
  bool fixed_direction = false;
  CMat basis;  ///< N1 x k orthonormal basis of null(G_1e)
  double theta = 0.0;  ///< Tr(Theta) / sigma^2 = 2 Ne
  Normalized norm;
  CMat b12_reduced;  ///< B^H b12 B
  CMat ge;           ///< (P_s / sigma^2) G_se^H G_se
};

OsbdProgram build_osbd_subproblem(const ChannelSet& ch, const SystemParams& params, const OsbdState& state,
                                  const OsbdOptions& options = {});

/// sqrt(tr_w21_prev / (y_prev - tr_w12_prev / sigma2)); keeps state.eta when
/// the denominator is <= 1e-12 or the ratio is not a positive finite number.
double agm_eta_update(const OsbdState& state, double tr_w21_prev, double y_prev, double tr_w12_prev,
                      double sigma2);

struct OsbdResult : SchemeOutcome {
  OsbdState state;
};

/// SCA loop with w confined to null(G_1e) and no AN. Stops when
/// |R - R_0|^2 <= 1e-4.
OsbdResult run_osbd(const ChannelSet& ch, const SystemParams& params, const TraceSink& trace = {});

/// Direct-link NOMA: same machinery with beta = 0, w = 0, Sigma = 0.
OsbdResult run_noma_without_eh(const ChannelSet& ch, const SystemParams& params, const TraceSink& trace = {});

}  // namespace securebf
