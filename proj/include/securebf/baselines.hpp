#pragma once

#include "securebf/asbd.hpp"
#include "securebf/osbd.hpp"

namespace securebf {

struct OmaResult : SchemeOutcome {
  bool with_an = false;
  bool with_eh = false;
  double ssr = 0.0;  ///< time-division SSR at the returned point (bits)
};

/// Time-division comparator: equal subslots for D1 and D2 inside phase A,
/// each beamformed with the full P_s toward a secrecy-rate maximizing
/// direction (or a blend with MRT when that meets the thresholds). With EH,
/// D1 forwards x2 over phase B from its harvested budget; with AN the part of
/// that budget not spent on w is isotropic noise inside null(H_12). beta, the
/// beam blends and the relay share are grid searched. AN requires EH.
OmaResult baseline_oma(const ChannelSet& ch, const SystemParams& params, bool with_an, bool with_eh);

/// ASBD pipeline with the AN covariance fixed to zero.
inline AsbdResult baseline_without_an(const ChannelSet& ch, const SystemParams& params, const TraceSink& trace = {}) {
  return run_asbd_without_an(ch, params, trace);
}

/// Phase-A-only NOMA: beta = 0, w = 0, no AN.
inline OsbdResult baseline_noma_no_eh(const ChannelSet& ch, const SystemParams& params, const TraceSink& trace = {}) {
  return run_noma_without_eh(ch, params, trace);
}

/// Unit vector maximizing (1 + a |H v|^2) / (1 + e |G v|^2) over |v| = 1.
CVec secrecy_direction(const CMat& h, double a, const CMat& g, double e);

}  // namespace securebf
