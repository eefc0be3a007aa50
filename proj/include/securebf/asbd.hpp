#pragma once

#include <limits>
#include <vector>

#include "securebf/conic.hpp"
#include "securebf/linalg.hpp"
#include "securebf/sca_common.hpp"

namespace securebf {

/// Linearization points and progress of the passive-eavesdropper SCA loop.
struct AsbdState {
  double theta1 = 1.0;   ///< rate threshold of D1
  double psi1 = 1.0;     ///< rate threshold of D2
  double phi1 = 1.0;     ///< SIC at D1
  double omega1 = 1.0;   ///< QoS at D2
  double varphi1 = 1.0;  ///< energy-harvesting budget
  int iteration = 0;
  std::vector<double> objective_trace;   ///< Tr(Sigma) in watts per iteration
  std::vector<double> normalized_trace;  ///< subproblem objective per iteration
  double delta = std::numeric_limits<double>::infinity();
};

/// Handles into the emitted program.
struct AsbdProgram {
  conic::Program program;
  conic::HermitianBlock v1, v2, w;
  int q = -1;  ///< AN scale (absent without AN)
  int beta = -1;
  int theta = -1, psi = -1, phi = -1, omega = -1, varphi = -1;
  std::vector<int> feasibility_slacks;  ///< only in the feasibility phase
  bool with_an = true;
  double trace_p = 0.0;  ///< Tr of the null-space projector
  CMat projector;        ///< N1 x N1 projector onto null(H_12)
  Normalized norm;
};

struct AsbdOptions {
  bool with_an = true;
  bool feasibility_phase = false;  ///< minimize slack on the linearized rows instead
  double feasibility_margin = 1e-6;
};

AsbdProgram build_asbd_subproblem(const ChannelSet& ch, const SystemParams& params, const AsbdState& state,
                                  const AsbdOptions& options = {});

struct AsbdResult : SchemeOutcome {
  AsbdState state;
};

/// SCA loop over the relaxed subproblem. Sigma = q * w_scale * P with P the
/// projector onto null(H_12), so H_12 Sigma H_12^H = 0 exactly.
AsbdResult run_asbd(const ChannelSet& ch, const SystemParams& params, const TraceSink& trace = {});

/// Same pipeline with the AN disabled; maximizes D2's relay-phase SINR.
AsbdResult run_asbd_without_an(const ChannelSet& ch, const SystemParams& params, const TraceSink& trace = {});

}  // namespace securebf
