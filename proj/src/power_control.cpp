#include "securebf/power_control.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace securebf {

ScalarGains ScalarGains::from(const ChannelSet& ch, const SystemParams& p) {
  ScalarGains g;
  g.h_s1_raw = std::norm(ch.h_s1(0, 0));
  g.h1 = g.h_s1_raw / p.sigma2_watts;
  g.h2 = std::norm(ch.h_s2(0, 0)) / p.sigma2_watts;
  g.h12 = std::norm(ch.h_12(0, 0));
  g.gse2 = ch.g_se.squaredNorm();
  g.g1e2 = ch.g_1e.squaredNorm();
  return g;
}

std::optional<PowerSplit> power_split_from_beta(double beta, const SystemParams& p, double h1) {
  if (!(beta < 1.0)) return std::nullopt;
  const double a = p.p_s_watts * (1.0 - beta) * h1;
  if (!(a > 0.0)) return std::nullopt;
  const double rho1 = p.gamma_1 / a;
  if (rho1 > 1.0) return std::nullopt;
  return PowerSplit{rho1, 1.0 - rho1};
}

double power_control_relay_power(double beta, const ScalarGains& g, const SystemParams& p) {
  return beta * p.p_s_watts * g.h_s1_raw * p.tau / (1.0 - p.tau);
}

double power_control_objective(double beta, const ScalarGains& g, const SystemParams& p) {
  const double a = p.p_s_watts * (1.0 - beta) * g.h1;
  const double leak = (g.gse2 * p.p_s_watts + power_control_relay_power(beta, g, p) * g.g1e2) / (2.0 * p.sigma2_watts);
  return std::log1p(a) - std::log1p(leak);
}

namespace {

double relay_snr(double beta, const ScalarGains& g, const SystemParams& p) {
  return power_control_relay_power(beta, g, p) * g.h12 / p.sigma2_watts;
}

}  // namespace

std::optional<double> branch_rho1(TightBranch branch, double beta, const ScalarGains& g, const SystemParams& p) {
  const double a = p.p_s_watts * (1.0 - beta) * g.h1;
  const double h2 = p.p_s_watts * g.h2;
  double rho1 = std::numeric_limits<double>::quiet_NaN();
  switch (branch) {
    case TightBranch::d1_qos:
      if (a > 0.0) rho1 = p.gamma_1 / a;
      break;
    case TightBranch::sic:
      if (a > 0.0) rho1 = (a - p.gamma_2) / (a * (1.0 + p.gamma_2));
      break;
    case TightBranch::d2_qos: {
      const double t = p.gamma_2 - relay_snr(beta, g, p);
      if (t > 0.0 && h2 > 0.0) rho1 = (h2 - t) / (h2 * (1.0 + t));
      break;
    }
  }
  if (!(rho1 >= 0.0 && rho1 <= 1.0)) return std::nullopt;
  return rho1;
}

std::vector<double> power_control_residuals(double beta, double rho1, const ScalarGains& g, const SystemParams& p) {
  const double a = p.p_s_watts * (1.0 - beta) * g.h1;
  const double h2 = p.p_s_watts * g.h2;
  const double rho2 = 1.0 - rho1;
  return {a * rho1 - p.gamma_1, a * rho2 / (1.0 + a * rho1) - p.gamma_2,
          h2 * rho2 / (1.0 + h2 * rho1) + relay_snr(beta, g, p) - p.gamma_2};
}

BeamformingSolution power_control_solution(double beta, double rho1, const ChannelSet& ch, const SystemParams& p) {
  BeamformingSolution s = BeamformingSolution::zeros(p, SchemeMode::power_control);
  s.beta = beta;
  s.v1(0) = std::sqrt(rho1 * p.p_s_watts);
  s.v2(0) = std::sqrt((1.0 - rho1) * p.p_s_watts);
  s.w(0) = std::sqrt(power_control_relay_power(beta, ScalarGains::from(ch, p), p));
  return s;
}

namespace {

struct Interval {
  double lo = 1.0;
  double hi = 0.0;
  bool empty() const { return !(lo <= hi); }
};

/// Betas where the D1-QoS-tight split satisfies SIC and D2 QoS. SIC reduces to
/// P_s (1-beta) h1 >= g1 + g2 + g1 g2; D2 QoS, after clearing denominators,
/// to a concave quadratic e0 + e1 beta + e2 beta^2 >= 0.
Interval d1_branch_interval(const ScalarGains& g, const SystemParams& p) {
  const double a0 = p.p_s_watts * g.h1;
  const double g1 = p.gamma_1, g2 = p.gamma_2;
  Interval iv{0.0, std::min(1.0, p.beta_max)};
  if (!(a0 > 0.0)) return Interval{};
  iv.hi = std::min(iv.hi, 1.0 - (g1 + g2 + g1 * g2) / a0);

  const double h2 = p.p_s_watts * g.h2;
  const double k = p.p_s_watts * g.h1 * g.h12 * p.tau / (1.0 - p.tau);
  const double e0 = h2 * a0 - h2 * g1 - g2 * a0 - g2 * h2 * g1;
  const double e1 = -h2 * a0 + k * a0 + k * h2 * g1 + g2 * a0;
  const double e2 = -k * a0;
  const double scale = std::max({std::abs(e0), std::abs(e1), std::abs(e2), 1e-300});
  if (std::abs(e2) <= 1e-14 * scale) {
    if (std::abs(e1) <= 1e-14 * scale) {
      if (e0 < 0.0) return Interval{};
    } else if (e1 > 0.0) {
      iv.lo = std::max(iv.lo, -e0 / e1);
    } else {
      iv.hi = std::min(iv.hi, -e0 / e1);
    }
  } else {
    const double disc = e1 * e1 - 4.0 * e2 * e0;
    if (disc < 0.0) return Interval{};
    const double sq = std::sqrt(disc);
    // e2 < 0: the parabola opens downward; stable root pair.
    const double qq = -0.5 * (e1 + std::copysign(sq, e1));
    double r1 = qq / e2;
    double r2 = qq != 0.0 ? e0 / qq : r1;
    if (r1 > r2) std::swap(r1, r2);
    iv.lo = std::max(iv.lo, r1);
    iv.hi = std::min(iv.hi, r2);
  }
  // Keep strictly inside so rounding cannot flip the sign at a root.
  const double nudge = 1e-12 * std::max(1.0, std::abs(iv.lo));
  if (iv.lo > 0.0) iv.lo += nudge;
  return iv;
}

/// Maximizer of a concave function on [lo, hi].
template <class F>
double argmax_concave(F&& f, double lo, double hi) {
  double a = lo, b = hi;
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  double best = 0.5 * (a + b);
  for (double cand : {lo, hi})
    if (f(cand) >= f(best)) best = cand;
  return best;
}

bool feasible_point(double beta, double rho1, const ScalarGains& g, const SystemParams& p) {
  const auto res = power_control_residuals(beta, rho1, g, p);
  const double targets[] = {p.gamma_1, p.gamma_2, p.gamma_2};
  for (std::size_t i = 0; i < res.size(); ++i)
    if (res[i] < -1e-10 * std::max(1.0, targets[i])) return false;
  return true;
}

}  // namespace

PowerControlResult run_power_control(const ChannelSet& ch, const SystemParams& p, const TraceSink& trace) {
  const auto t0 = std::chrono::steady_clock::now();
  p.validate();
  ch.validate(p);
  if (p.n_s != 1 || p.n_1 != 1 || p.n_2 != 1) throw DomainError("power control needs n_s = n_1 = n_2 = 1");
  PowerControlResult res;
  res.solution = BeamformingSolution::zeros(p, SchemeMode::power_control);
  const ScalarGains g = ScalarGains::from(ch, p);

  const double a0 = p.p_s_watts * g.h1;
  const double leak_c = g.gse2 * p.p_s_watts / (2.0 * p.sigma2_watts);
  const double leak_d = p.p_s_watts * g.h_s1_raw * p.tau / (1.0 - p.tau) * g.g1e2 / (2.0 * p.sigma2_watts);

  bool have = false;
  double best_beta = 0.0, best_rho1 = 0.0, best_obj = -std::numeric_limits<double>::infinity();
  TightBranch best_branch = TightBranch::d1_qos;

  const Interval iv = d1_branch_interval(g, p);
  if (!iv.empty()) {
    PowerControlState& st = res.state;
    // Start on the exponential so the first surrogate is already tight at iv.lo.
    st.upsilon = std::log1p(leak_c + leak_d * iv.lo);
    double prev = -std::numeric_limits<double>::infinity();
    int n = 0;
    while (n < p.sca_max_iters) {
      ++n;
      const double un = st.upsilon;
      const double eun = std::exp(un);
      // Smallest upsilon with exp(un)(upsilon - un + 1) >= 1 + c + d beta.
      auto upsilon_of = [&](double b) { return un - 1.0 + (1.0 + leak_c + leak_d * b) / eun; };
      auto surrogate = [&](double b) { return std::log1p(a0 * (1.0 - b)) - upsilon_of(b); };
      const double beta = argmax_concave(surrogate, iv.lo, iv.hi);
      const double value = surrogate(beta);
      st.beta = beta;
      st.upsilon = upsilon_of(beta);
      st.iteration = n;
      st.objective_trace.push_back(value);
      if (trace) trace({{"n", n}, {"upsilon", st.upsilon}, {"beta", beta}, {"objective", value}});
      if (std::abs(value - prev) < p.sca_tolerance) {
        res.converged = true;
        break;
      }
      prev = value;
    }
    res.iterations = n;
    if (const auto split = power_split_from_beta(st.beta, p, g.h1)) {
      st.rho1 = split->rho1;
      st.rho2 = split->rho2;
      if (feasible_point(st.beta, st.rho1, g, p)) {
        have = true;
        best_beta = st.beta;
        best_rho1 = st.rho1;
        best_obj = power_control_objective(st.beta, g, p);
      }
    }
  }

  // Other tight branches on a coarse beta grid.
  const double cap = std::min(1.0, p.beta_max);
  for (TightBranch br : {TightBranch::sic, TightBranch::d2_qos}) {
    for (int i = 0; i <= 100; ++i) {
      const double beta = cap * i / 100.0;
      const auto rho1 = branch_rho1(br, beta, g, p);
      if (!rho1 || !feasible_point(beta, *rho1, g, p)) continue;
      const double obj = power_control_objective(beta, g, p);
      if (obj > best_obj + 1e-12) {
        have = true;
        best_obj = obj;
        best_beta = beta;
        best_rho1 = *rho1;
        best_branch = br;
      }
    }
  }

  res.status = conic::Status::optimal;
  if (!have) {
    res.status = conic::Status::infeasible;
    res.message = "no feasible power split";
  } else {
    res.feasible = true;
    res.objective = best_obj;
    res.branch = best_branch;
    res.state.beta = best_beta;
    res.state.rho1 = best_rho1;
    res.state.rho2 = 1.0 - best_rho1;
    res.solution = power_control_solution(best_beta, best_rho1, ch, p);
  }
  if (res.iterations == 0) res.iterations = 1;
  res.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace securebf
