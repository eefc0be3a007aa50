#include "securebf/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace securebf {

std::string to_string(SchemeMode mode) {
  switch (mode) {
    case SchemeMode::asbd: return "asbd";
    case SchemeMode::osbd: return "osbd";
    case SchemeMode::power_control: return "power-control";
    case SchemeMode::baseline_without_an: return "without-an";
    case SchemeMode::baseline_oma: return "oma";
    case SchemeMode::baseline_noma_no_eh: return "noma-wo-eh";
  }
  return "unknown";
}

BeamformingSolution BeamformingSolution::zeros(const SystemParams& p, SchemeMode mode) {
  BeamformingSolution s;
  s.v1 = CVec::Zero(p.n_s);
  s.v2 = CVec::Zero(p.n_s);
  s.w = CVec::Zero(p.n_1);
  s.sigma_an = CMat::Zero(p.n_1, p.n_1);
  s.mode = mode;
  return s;
}

void BeamformingSolution::validate(const SystemParams& p) const {
  if (v1.size() != p.n_s || v2.size() != p.n_s || w.size() != p.n_1 || sigma_an.rows() != p.n_1 ||
      sigma_an.cols() != p.n_1)
    throw DomainError("beamforming solution dimensions do not match params");
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta outside [0,1]");
  if ((sigma_an - sigma_an.adjoint()).norm() > 1e-9 * (1.0 + sigma_an.norm()))
    throw DomainError("AN covariance is not Hermitian");
  if (p.n_1 > 0 && sigma_an.norm() > 0.0) {
    Eigen::SelfAdjointEigenSolver<CMat> es(sigma_an);
    const double tr = sigma_an.trace().real();
    if (es.eigenvalues().minCoeff() < -1e-9 * std::max(tr, 0.0)) throw DomainError("AN covariance is not PSD");
  }
  // Time division lets each subslot spend the full budget.
  const double load = mode == SchemeMode::baseline_oma ? std::max(v1.squaredNorm(), v2.squaredNorm())
                                                       : v1.squaredNorm() + v2.squaredNorm();
  if (load > p.p_s_watts * (1.0 + 1e-6))
    throw DomainError("controller transmit power exceeds p_s_watts");
}

nlohmann::json RateReport::to_json() const {
  return {{"sinr_1_s2", sinr_1_s2}, {"snr_1_s1", snr_1_s1}, {"sinr_2_a", sinr_2_a},
          {"sinr_2_b", sinr_2_b},   {"sinr_2_combined", sinr_2_combined},
          {"p_t_watts", p_t_watts}, {"r_1", r_1}, {"r_2", r_2}, {"r_e", r_e}, {"ssr", ssr},
          {"sic_violated", sic_violated}};
}

std::string RateReport::csv_header() {
  return "sinr_1_s2,snr_1_s1,sinr_2_a,sinr_2_b,sinr_2_combined,p_t_watts,r_1,r_2,r_e,ssr,sic_violated";
}

std::string RateReport::csv_row() const {
  std::ostringstream os;
  os << std::setprecision(17) << sinr_1_s2 << ',' << snr_1_s1 << ',' << sinr_2_a << ',' << sinr_2_b << ','
     << sinr_2_combined << ',' << p_t_watts << ',' << r_1 << ',' << r_2 << ',' << r_e << ',' << ssr << ','
     << (sic_violated ? 1 : 0);
  return os.str();
}

namespace {

void require_noise(const SystemParams& p) {
  if (!(p.sigma2_watts > 0.0)) throw DomainError("sigma2_watts must be > 0");
}

double sq(const CMat& m, const CVec& v) { return (m * v).squaredNorm(); }

double quad(const CMat& m, const CMat& cov) {
  if (cov.size() == 0) return 0.0;
  return std::max(0.0, (m * cov * m.adjoint()).trace().real());
}

PhaseASinrs phase_a(const LinkPowers& lp, double beta, const SystemParams& p) {
  require_noise(p);
  const double s2 = p.sigma2_watts;
  const double keep = 1.0 - beta;
  PhaseASinrs out;
  out.sinr_1_s2 = keep * lp.s1_v2 / (keep * lp.s1_v1 + s2);
  out.snr_1_s1 = keep * lp.s1_v1 / s2;
  out.sinr_2_a = lp.s2_v2 / (lp.s2_v1 + s2);
  return out;
}

double budget(const LinkPowers& lp, double beta, const SystemParams& p) {
  return beta * (lp.s1_v1 + lp.s1_v2) * p.tau / (1.0 - p.tau);
}

double phase_b(const LinkPowers& lp, const SystemParams& p) {
  require_noise(p);
  return lp.d2_w / (lp.d2_an + p.sigma2_watts);
}

double leakage(const LinkPowers& lp, const SystemParams& p) {
  require_noise(p);
  const double trace_q = 2.0 * p.n_e * p.sigma2_watts + lp.eve_an;
  return 0.5 * std::log2(1.0 + (lp.eve_v + lp.eve_w) / trace_q);
}

}  // namespace

LinkPowers LinkPowers::of(const ChannelSet& ch, const BeamformingSolution& sol) {
  LinkPowers lp;
  lp.s1_v1 = sq(ch.h_s1, sol.v1);
  lp.s1_v2 = sq(ch.h_s1, sol.v2);
  lp.s2_v1 = sq(ch.h_s2, sol.v1);
  lp.s2_v2 = sq(ch.h_s2, sol.v2);
  lp.d2_w = sq(ch.h_12, sol.w);
  lp.d2_an = quad(ch.h_12, sol.sigma_an);
  lp.eve_v = sq(ch.g_se, sol.v1) + sq(ch.g_se, sol.v2);
  lp.eve_w = sq(ch.g_1e, sol.w);
  lp.eve_an = quad(ch.g_1e, sol.sigma_an);
  lp.v_power = sol.v1.squaredNorm() + sol.v2.squaredNorm();
  lp.w_power = sol.w.squaredNorm();
  lp.an_power = sol.sigma_an.size() ? sol.sigma_an.trace().real() : 0.0;
  lp.eve_v2 = sq(ch.g_se, sol.v2);
  lp.v2_power = sol.v2.squaredNorm();
  return lp;
}

PhaseASinrs phase_a_sinrs(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& p) {
  return phase_a(LinkPowers::of(ch, sol), sol.beta, p);
}

double relay_power_budget(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& p) {
  return budget(LinkPowers::of(ch, sol), sol.beta, p);
}

double phase_b_sinr_d2(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& p) {
  return phase_b(LinkPowers::of(ch, sol), p);
}

double eavesdropper_leakage_rate(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& p) {
  return leakage(LinkPowers::of(ch, sol), p);
}

RateReport secrecy_sum_rate(const LinkPowers& lp, double beta, const SystemParams& p) {
  const auto a = phase_a(lp, beta, p);
  RateReport r;
  r.sinr_1_s2 = a.sinr_1_s2;
  r.snr_1_s1 = a.snr_1_s1;
  r.sinr_2_a = a.sinr_2_a;
  r.sinr_2_b = phase_b(lp, p);
  r.sinr_2_combined = r.sinr_2_a + r.sinr_2_b;
  r.p_t_watts = budget(lp, beta, p);
  r.r_1 = 0.5 * std::log2(1.0 + r.snr_1_s1);
  r.r_2 = 0.5 * std::log2(1.0 + r.sinr_2_combined);
  r.r_e = leakage(lp, p);
  r.ssr = std::max(0.0, r.r_1 + r.r_2 - r.r_e);
  r.sic_violated = r.sinr_1_s2 < p.gamma;
  return r;
}

RateReport secrecy_sum_rate(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& p) {
  return secrecy_sum_rate(LinkPowers::of(ch, sol), sol.beta, p);
}

double ge_violation(double lhs, double rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
  return (rhs - lhs) / scale;
}

double ConstraintCheck::worst() const {
  double w = -std::numeric_limits<double>::infinity();
  for (const auto& [_, v] : violations) w = std::max(w, v);
  return w;
}

std::string ConstraintCheck::describe() const {
  std::ostringstream os;
  for (const auto& [name, v] : violations) os << name << '=' << v << ' ';
  return os.str();
}

namespace {

template <std::size_t N>
ConstraintCheck named(const std::array<const char*, N>& names, const std::array<double, N>& v) {
  ConstraintCheck c;
  c.violations.reserve(N);
  for (std::size_t i = 0; i < N; ++i) c.violations.emplace_back(names[i], v[i]);
  return c;
}

template <std::size_t N>
double largest(const std::array<double, N>& v) {
  double w = -std::numeric_limits<double>::infinity();
  for (double x : v) w = std::max(w, x);
  return w;
}

constexpr std::array<const char*, 6> kAsbdNames{"rate_d1", "rate_d2", "sic_d1", "qos_d2", "energy_harvesting",
                                                "transmit_power"};
constexpr std::array<const char*, 4> kOsbdNames{"relay_power", "sic_d1", "qos_d2", "transmit_power"};
constexpr std::array<const char*, 5> kPowerControlNames{"qos_d1", "sic_d1", "qos_d2", "power_split", "relay_power"};

std::array<double, 6> asbd_violations(const LinkPowers& lp, double beta, const SystemParams& p) {
  const auto r = secrecy_sum_rate(lp, beta, p);
  return {ge_violation(1.0 + r.snr_1_s1, p.r_1),     ge_violation(1.0 + r.sinr_2_combined, p.r_2),
          ge_violation(r.sinr_1_s2, p.gamma),        ge_violation(r.sinr_2_combined, p.gamma),
          ge_violation(r.p_t_watts, lp.w_power + lp.an_power), ge_violation(p.p_s_watts, lp.v_power)};
}

std::array<double, 4> osbd_violations(const LinkPowers& lp, double beta, const SystemParams& p) {
  const auto r = secrecy_sum_rate(lp, beta, p);
  return {ge_violation(r.p_t_watts, lp.w_power), ge_violation(r.sinr_1_s2, p.gamma),
          ge_violation(r.sinr_2_combined, p.gamma), ge_violation(p.p_s_watts, lp.v_power)};
}

std::array<double, 5> power_control_violations(const LinkPowers& lp, double beta, const SystemParams& p) {
  const auto r = secrecy_sum_rate(lp, beta, p);
  return {ge_violation(r.snr_1_s1, p.gamma_1), ge_violation(r.sinr_1_s2, p.gamma_2),
          ge_violation(r.sinr_2_combined, p.gamma_2),
          std::abs(lp.v_power - p.p_s_watts) / std::max(p.p_s_watts, std::numeric_limits<double>::min()),
          ge_violation(r.p_t_watts, lp.w_power)};
}

constexpr std::array<const char*, 7> kOmaNames{"rate_d1", "rate_d2", "qos_d2", "transmit_power_x1",
                                               "transmit_power_x2", "decode_x2_d1", "relay_power"};

}  // namespace

RateReport oma_secrecy_sum_rate(const LinkPowers& lp, double beta, const SystemParams& p, bool with_eh) {
  require_noise(p);
  const double s2 = p.sigma2_watts;
  const double b = with_eh ? beta : 0.0;
  RateReport r;
  r.snr_1_s1 = (1.0 - b) * lp.s1_v1 / s2;
  r.sinr_1_s2 = lp.s1_v2 / s2;
  r.sinr_2_a = lp.s2_v2 / s2;
  r.sinr_2_b = with_eh ? lp.d2_w / (lp.d2_an + s2) : 0.0;
  r.sinr_2_combined = r.sinr_2_a + r.sinr_2_b;
  r.p_t_watts = with_eh ? 0.5 * b * lp.s1_v1 * p.tau / (1.0 - p.tau) : 0.0;
  r.r_1 = 0.25 * std::log2(1.0 + r.snr_1_s1);
  r.r_2 = 0.25 * std::log2(1.0 + r.sinr_2_combined);
  const double q = 2.0 * p.n_e * s2;
  const double eve_v1 = std::max(0.0, lp.eve_v - lp.eve_v2);
  const double leak_x2 = with_eh ? (lp.eve_v2 + lp.eve_w) / (q + lp.eve_an) : lp.eve_v2 / q;
  r.r_e = 0.25 * std::log2(1.0 + eve_v1 / q) + 0.25 * std::log2(1.0 + leak_x2);
  r.ssr = std::max(0.0, r.r_1 + r.r_2 - r.r_e);
  r.sic_violated = with_eh && r.sinr_1_s2 < p.gamma;
  return r;
}

RateReport oma_secrecy_sum_rate(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& p,
                                bool with_eh) {
  return oma_secrecy_sum_rate(LinkPowers::of(ch, sol), sol.beta, p, with_eh);
}

namespace {

std::array<double, 7> oma_violations(const LinkPowers& lp, double beta, const SystemParams& p, bool with_eh) {
  const auto r = oma_secrecy_sum_rate(lp, beta, p, with_eh);
  const double relay_load = lp.w_power + lp.an_power;
  return {ge_violation(1.0 + r.snr_1_s1, p.r_1),
          ge_violation(1.0 + r.sinr_2_combined, p.r_2),
          ge_violation(r.sinr_2_combined, p.gamma),
          ge_violation(p.p_s_watts, std::max(0.0, lp.v_power - lp.v2_power)),
          ge_violation(p.p_s_watts, lp.v2_power),
          with_eh ? ge_violation(r.sinr_1_s2, p.gamma) : -1.0,
          with_eh ? ge_violation(r.p_t_watts, relay_load) : (relay_load > 0.0 ? 1.0 : -1.0)};
}

}  // namespace

ConstraintCheck check_oma_constraints(const LinkPowers& lp, double beta, const SystemParams& p, bool with_eh) {
  return named(kOmaNames, oma_violations(lp, beta, p, with_eh));
}

ConstraintCheck check_oma_constraints(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& p,
                                      bool with_eh) {
  return check_oma_constraints(LinkPowers::of(ch, sol), sol.beta, p, with_eh);
}

double oma_worst_violation(const LinkPowers& lp, double beta, const SystemParams& p, bool with_eh) {
  return largest(oma_violations(lp, beta, p, with_eh));
}

ConstraintCheck check_asbd_constraints(const LinkPowers& lp, double beta, const SystemParams& p) {
  return named(kAsbdNames, asbd_violations(lp, beta, p));
}

double asbd_worst_violation(const LinkPowers& lp, double beta, const SystemParams& p) {
  return largest(asbd_violations(lp, beta, p));
}

ConstraintCheck check_asbd_constraints(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& p) {
  return check_asbd_constraints(LinkPowers::of(ch, sol), sol.beta, p);
}

ConstraintCheck check_osbd_constraints(const LinkPowers& lp, double beta, const SystemParams& p) {
  return named(kOsbdNames, osbd_violations(lp, beta, p));
}

double osbd_worst_violation(const LinkPowers& lp, double beta, const SystemParams& p) {
  return largest(osbd_violations(lp, beta, p));
}

ConstraintCheck check_osbd_constraints(const ChannelSet& ch, const BeamformingSolution& sol, const SystemParams& p) {
  return check_osbd_constraints(LinkPowers::of(ch, sol), sol.beta, p);
}

ConstraintCheck check_power_control_constraints(const LinkPowers& lp, double beta, const SystemParams& p) {
  return named(kPowerControlNames, power_control_violations(lp, beta, p));
}

double power_control_worst_violation(const LinkPowers& lp, double beta, const SystemParams& p) {
  return largest(power_control_violations(lp, beta, p));
}

ConstraintCheck check_power_control_constraints(const ChannelSet& ch, const BeamformingSolution& sol,
                                                const SystemParams& p) {
  return check_power_control_constraints(LinkPowers::of(ch, sol), sol.beta, p);
}

}  // namespace securebf
