#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "securebf/channel_model.hpp"

namespace securebf {

enum class SchemeMode { asbd, osbd, power_control, baseline_without_an, baseline_oma, baseline_noma_no_eh };

std::string to_string(SchemeMode mode);

/// Beamformers, AN covariance and PS ratio. All powers in watts.
struct BeamformingSolution {
  CVec v1;        ///< Ns
  CVec v2;        ///< Ns
  CVec w;         ///< N1
  CMat sigma_an;  ///< N1 x N1, Hermitian PSD
  double beta = 0.0;
  SchemeMode mode = SchemeMode::asbd;
  bool randomized = false;  ///< rank-one extraction fell back to randomization

  static BeamformingSolution zeros(const SystemParams& params, SchemeMode mode);
  /// Throws DomainError on dimension mismatch, non-PSD AN, beta outside
  /// [0,1] or transmit power above p_s_watts * (1 + 1e-6).
  void validate(const SystemParams& params) const;
};

struct ConstraintCheck;

struct PhaseASinrs {
  double sinr_1_s2 = 0.0;
  double snr_1_s1 = 0.0;
  double sinr_2_a = 0.0;
};

struct RateReport {
  double sinr_1_s2 = 0.0;
  double snr_1_s1 = 0.0;
  double sinr_2_a = 0.0;
  double sinr_2_b = 0.0;
  double sinr_2_combined = 0.0;
  double p_t_watts = 0.0;
  double r_1 = 0.0;  ///< bits per channel use
  double r_2 = 0.0;
  double r_e = 0.0;
  double ssr = 0.0;
  bool sic_violated = false;  ///< sinr_1_s2 < gamma

  nlohmann::json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

/// Received powers (watts) that every rate and constraint depends on. Built
/// from a solution by `of`, or assembled directly by callers that enumerate
/// many candidates.
struct LinkPowers {
  double s1_v1 = 0.0;   ///< |H_s1 v1|^2
  double s1_v2 = 0.0;   ///< |H_s1 v2|^2
  double s2_v1 = 0.0;   ///< |H_s2 v1|^2
  double s2_v2 = 0.0;   ///< |H_s2 v2|^2
  double d2_w = 0.0;    ///< |H_12 w|^2
  double d2_an = 0.0;   ///< Tr(H_12 Sigma H_12^H)
  double eve_v = 0.0;   ///< |G_se v1|^2 + |G_se v2|^2
  double eve_w = 0.0;   ///< |G_1e w|^2
  double eve_an = 0.0;  ///< Tr(G_1e Sigma G_1e^H)
  double v_power = 0.0;   ///< |v1|^2 + |v2|^2
  double w_power = 0.0;   ///< |w|^2
  double an_power = 0.0;  ///< Tr(Sigma)
  double eve_v2 = 0.0;    ///< |G_se v2|^2 alone; the time-division baseline leaks the streams separately
  double v2_power = 0.0;  ///< |v2|^2 alone

  static LinkPowers of(const ChannelSet& ch, const BeamformingSolution& sol);
};

RateReport secrecy_sum_rate(const LinkPowers& lp, double beta, const SystemParams& params);
ConstraintCheck check_asbd_constraints(const LinkPowers& lp, double beta, const SystemParams& params);
ConstraintCheck check_osbd_constraints(const LinkPowers& lp, double beta, const SystemParams& params);
ConstraintCheck check_power_control_constraints(const LinkPowers& lp, double beta, const SystemParams& params);
/// Largest entry of the matching check, without building the named list.
double asbd_worst_violation(const LinkPowers& lp, double beta, const SystemParams& params);
double osbd_worst_violation(const LinkPowers& lp, double beta, const SystemParams& params);
double power_control_worst_violation(const LinkPowers& lp, double beta, const SystemParams& params);

/// Time-division (OMA) baseline. Phase A is split into equal subslots for x1
/// and x2, so every rate carries 1/2 * 1/2. With EH, D1 splits only its own
/// subslot, decodes x2 in the other and forwards it over phase B with the
/// harvested budget beta |H_s1 v1|^2 tau / (2 (1 - tau)). Each subslot may
/// use the full P_s. Field reuse: sinr_1_s2 is D1's SNR on x2, sinr_2_a the
/// direct D2 SNR.
RateReport oma_secrecy_sum_rate(const LinkPowers& lp, double beta, const SystemParams& params, bool with_eh);
RateReport oma_secrecy_sum_rate(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& params,
                                bool with_eh);
/// Rate thresholds, D2 QoS, per-subslot power and, with EH, D1 decoding x2
/// and the relay budget.
ConstraintCheck check_oma_constraints(const LinkPowers& lp, double beta, const SystemParams& params, bool with_eh);
ConstraintCheck check_oma_constraints(const ChannelSet& ch, const BeamformingSolution& sol,
                                      const SystemParams& params, bool with_eh);
double oma_worst_violation(const LinkPowers& lp, double beta, const SystemParams& params, bool with_eh);

PhaseASinrs phase_a_sinrs(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& params);

/// Harvested energy over the relay phase duration. With tau = 1/2 this is
/// beta * (|H_s1 v1|^2 + |H_s1 v2|^2).
double relay_power_budget(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& params);

double phase_b_sinr_d2(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& params);

/// Trace-ratio leakage rate of the colluding eavesdroppers, in bits.
double eavesdropper_leakage_rate(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& params);

RateReport secrecy_sum_rate(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& params);

/// Signed relative violation of each original (unrelaxed) constraint:
/// positive means violated. Names follow the constraint roles.
struct ConstraintCheck {
  std::vector<std::pair<std::string, double>> violations;
  double worst() const;
  bool satisfied(double rel_slack) const { return worst() <= rel_slack; }
  std::string describe() const;
};

/// Constraints of the passive-eavesdropper problem: rate thresholds, SIC,
/// QoS, energy-harvesting budget, transmit power.
ConstraintCheck check_asbd_constraints(const ChannelSet& ch, const BeamformingSolution& sol,
                                       const SystemParams& params);
/// Constraints of the active-eavesdropper problem: relay power, SIC, QoS,
/// transmit power.
ConstraintCheck check_osbd_constraints(const ChannelSet& ch, const BeamformingSolution& sol,
                                       const SystemParams& params);
/// Single-antenna constraints with the per-user targets gamma_1/gamma_2.
ConstraintCheck check_power_control_constraints(const ChannelSet& ch, const BeamformingSolution& sol,
                                                const SystemParams& params);

/// Relative violation of lhs >= rhs.
double ge_violation(double lhs, double rhs);

}  // namespace securebf
