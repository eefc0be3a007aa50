#include "securebf/osbd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "securebf/randomization.hpp"

namespace securebf {

using conic::LinExpr;
using conic::Program;

OsbdProgram build_osbd_subproblem(const ChannelSet& ch, const SystemParams& p, const OsbdState& st,
                                  const OsbdOptions& opt) {
  p.validate();
  ch.validate(p);
  for (double v : {st.tau_s, st.mu1, st.mu2, st.varphi2, st.xi, st.phi1, st.omega1, st.eta})
    if (!std::isfinite(v)) throw DomainError("osbd: non-finite linearization point");
  if (!(st.eta > 0.0)) throw DomainError("osbd: eta must be > 0");

  OsbdProgram out;
  out.relay = opt.relay;
  out.fixed_direction = opt.relay && p.osbd_fixed_direction;
  out.norm = Normalized::from(ch, p);
  out.theta = 2.0 * p.n_e;
  out.ge = (p.p_s_watts / p.sigma2_watts) * (ch.g_se.adjoint() * ch.g_se);
  const Normalized& nm = out.norm;
  Program& prog = out.program;

  out.v1 = prog.add_hermitian("V1", p.n_s);
  out.v2 = prog.add_hermitian("V2", p.n_s);
  LinExpr b12, relay_load, beta;
  if (out.relay) {
    if (p.n_1 <= p.n_e) throw DomainError("osbd: needs n_1 > n_e");
    out.basis = eve_null_basis(ch.g_1e).basis;
    out.b12_reduced = out.basis.adjoint() * nm.b12 * out.basis;
    const int k = static_cast<int>(out.basis.cols());
    if (out.fixed_direction) {
      out.alpha = prog.add_scalar("alpha");
      const LinExpr alpha = prog.scalar(out.alpha);
      prog.add_nonneg(alpha, "alpha-lower");
      b12 = out.b12_reduced.trace().real() * alpha;
      relay_load = static_cast<double>(k) * alpha;
    } else {
      out.x = prog.add_hermitian("X", k);
      b12 = Program::trace_product(out.x, out.b12_reduced);
      relay_load = Program::trace(out.x);
    }
    out.beta = prog.add_scalar("beta");
    beta = prog.scalar(out.beta);
    prog.add_nonneg(beta, "beta-lower");
    prog.add_nonneg(std::min(p.beta_max, 1.0) - beta, "beta-upper");
  }

  out.t1 = prog.add_scalar("t1");
  out.t2 = prog.add_scalar("t2");
  out.te = prog.add_scalar("te");
  out.mu1 = prog.add_scalar("mu1");
  out.mu2 = prog.add_scalar("mu2");
  out.tau_s = prog.add_scalar("tau_s");
  out.xi = prog.add_scalar("xi");
  out.phi1 = prog.add_scalar("phi1");
  const int q1 = prog.add_scalar("q1");
  const int q2 = prog.add_scalar("q2");
  const int u1 = prog.add_scalar("u1");
  const int u2 = prog.add_scalar("u2");

  const LinExpr a11 = Program::trace_product(out.v1, nm.a1);
  const LinExpr a12 = Program::trace_product(out.v2, nm.a1);
  const LinExpr a21 = Program::trace_product(out.v1, nm.a2);
  const LinExpr a22 = Program::trace_product(out.v2, nm.a2);
  const LinExpr ae = Program::trace_product(out.v1, out.ge) + Program::trace_product(out.v2, out.ge);
  const LinExpr t1 = prog.scalar(out.t1), t2 = prog.scalar(out.t2), te = prog.scalar(out.te);
  const LinExpr mu1 = prog.scalar(out.mu1), mu2 = prog.scalar(out.mu2), tau_s = prog.scalar(out.tau_s);
  const double th = out.theta;
  const double g = p.gamma;

  prog.add_nonneg(1.0 - Program::trace(out.v1) - Program::trace(out.v2), "transmit-power");
  prog.add_nonneg(mu1, "mu1-lower");
  prog.add_nonneg(mu2, "mu2-lower");

  // Rows that depend on the linearization point; the feasibility phase relaxes them.
  std::vector<std::pair<LinExpr, const char*>> rows;

  // D1: log(1 + (1-beta) a11 / Theta) >= mu1.
  prog.add_lmi(conic::schur_2x2(1.0 - beta, prog.scalar(out.xi), a11, "rate-d1"));
  rows.emplace_back(square_minorant(st.xi, prog.scalar(out.xi)) - th * (t1 - 1.0), "rate-d1-sca");
  const double t1n = std::exp(st.mu1);
  prog.add_lmi(conic::schur_2x2(prog.scalar(q1), std::sqrt(t1n), t1, "log-d1"));
  prog.add_nonneg(std::log(t1n) + 1.0 - prog.scalar(q1) - mu1, "log-d1-minorant");

  // D2: (t2 - b12) a21 <= a22 + b12 + a21 - t2 + 1 through the AGM bound.
  const double eta = st.eta;
  prog.add_lmi(conic::schur_2x2(prog.scalar(u1), eta * (t2 - b12), 1.0, "agm-x"));
  prog.add_lmi(conic::schur_2x2(prog.scalar(u2), (1.0 / eta) * a21, 1.0, "agm-y"));
  rows.emplace_back(2.0 * (a22 + b12 + a21 - t2 + 1.0) - prog.scalar(u1) - prog.scalar(u2), "rate-d2-agm");
  const double t2n = std::exp(st.mu2);
  prog.add_lmi(conic::schur_2x2(prog.scalar(q2), std::sqrt(t2n), t2, "log-d2"));
  prog.add_nonneg(std::log(t2n) + 1.0 - prog.scalar(q2) - mu2, "log-d2-minorant");

  // Leakage: tau_s >= log(1 + ae / Theta), with log bounded by its tangent.
  const double ten = std::exp(st.tau_s);
  prog.add_nonneg(th * te - th - ae, "leakage");
  prog.add_nonneg(tau_s - (std::log(ten) + (1.0 / ten) * te - 1.0), "leakage-tangent");

  prog.add_lmi(conic::schur_2x2(1.0 - beta, prog.scalar(out.phi1), a12 - g * a11, "sic-d1"));
  rows.emplace_back(square_minorant(st.phi1, prog.scalar(out.phi1)) - g, "sic-d1-sca");

  if (out.relay) {
    out.omega1 = prog.add_scalar("omega1");
    out.varphi2 = prog.add_scalar("varphi2");
    prog.add_lmi(conic::schur_2x2(b12, prog.scalar(out.omega1), a21, "qos-d2"));
    rows.emplace_back(square_minorant(st.omega1, prog.scalar(out.omega1)) - (g * a21 - b12 - a22 + g), "qos-d2-sca");
    prog.add_lmi(conic::schur_2x2(beta, prog.scalar(out.varphi2), nm.c_tau * (a11 + a12), "relay-power"));
    rows.emplace_back(square_minorant(st.varphi2, prog.scalar(out.varphi2)) - nm.kappa_w * relay_load,
                      "relay-power-sca");
  } else {
    rows.emplace_back(a22 - g * a21 - g, "qos-d2");
  }

  if (opt.feasibility_phase) {
    LinExpr total;
    for (const auto& [row, label] : rows) {
      const int s = prog.add_scalar(std::string("slack-") + label);
      out.feasibility_slacks.push_back(s);
      prog.add_nonneg(prog.scalar(s), "slack");
      prog.add_nonneg(row + prog.scalar(s) - opt.feasibility_margin, label);
      total += prog.scalar(s);
    }
    prog.maximize(-1.0 * total);
    return out;
  }
  for (const auto& [row, label] : rows) prog.add_nonneg(row, label);
  prog.maximize(mu1 + mu2 - tau_s);
  return out;
}

double agm_eta_update(const OsbdState& st, double tr_w21_prev, double y_prev, double tr_w12_prev, double sigma2) {
  const double denom = y_prev - tr_w12_prev / sigma2;
  if (!(denom > 1e-12)) return st.eta;
  const double eta = std::sqrt(tr_w21_prev / denom);
  if (!std::isfinite(eta) || !(eta > 0.0)) return st.eta;
  return eta;
}

namespace {

/// Subproblem point in normalized units; x is N1 x N1 (already lifted).
struct OsbdPoint {
  CMat v1, v2, x;
  double beta = 0.0;
  double objective = 0.0;
};

OsbdPoint read_point(const OsbdProgram& op, const conic::Solution& sol, int n_1) {
  OsbdPoint pt;
  pt.v1 = sol.value(op.v1);
  pt.v2 = sol.value(op.v2);
  if (!op.relay) {
    pt.x = CMat::Zero(n_1, n_1);
  } else if (op.fixed_direction) {
    pt.x = std::max(0.0, sol.x[op.alpha]) * (op.basis * op.basis.adjoint());
  } else {
    pt.x = op.basis * sol.value(op.x) * op.basis.adjoint();
  }
  pt.beta = op.relay ? std::clamp(sol.x[op.beta], 0.0, 1.0) : 0.0;
  pt.objective = sol.objective;
  return pt;
}

struct Terms {
  double a11, a12, a21, a22, b12, ae;
};

Terms terms_at(const OsbdPoint& pt, const OsbdProgram& op) {
  auto tr = [](const CMat& a, const CMat& x) { return (a * x).trace().real(); };
  const Normalized& nm = op.norm;
  return Terms{tr(nm.a1, pt.v1), tr(nm.a1, pt.v2), tr(nm.a2, pt.v1), tr(nm.a2, pt.v2), tr(nm.b12, pt.x),
               tr(op.ge, pt.v1) + tr(op.ge, pt.v2)};
}

/// Moves every surrogate to its tangent at `pt`; returns the exact R there.
double tighten(OsbdState& st, const OsbdPoint& pt, const OsbdProgram& op, const SystemParams& p) {
  const Terms t = terms_at(pt, op);
  auto root = [](double v) { return std::sqrt(std::max(0.0, v)); };
  const double keep = 1.0 - pt.beta;
  st.mu1 = std::log1p(std::max(0.0, keep * t.a11) / op.theta);
  const double y = 1.0 + std::max(0.0, t.a22) / (1.0 + std::max(0.0, t.a21)) + std::max(0.0, t.b12);
  st.mu2 = std::log(y);
  st.tau_s = std::log1p(std::max(0.0, t.ae) / op.theta);
  st.xi = root(keep * t.a11);
  st.phi1 = root(keep * (t.a12 - p.gamma * t.a11));
  st.omega1 = root(t.b12 * t.a21);
  st.varphi2 = root(pt.beta * op.norm.c_tau * (t.a11 + t.a12));
  st.phi2 = root(t.ae);
  st.eta = agm_eta_update(st, std::max(0.0, t.a21), y, std::max(0.0, t.b12), 1.0);
  return st.mu1 + st.mu2 - st.tau_s;
}

void clamp_w_to_budget(BeamformingSolution& s, const ChannelSet& ch, const SystemParams& p) {
  const double load = s.w.squaredNorm();
  if (load <= 0.0) return;
  const double budget = relay_power_budget(ch, s, p);
  if (budget < load) s.w *= std::sqrt(std::max(0.0, budget) / load);
}

/// Slack-minimizing passes that move the linearization point until every
/// convexified row holds; leaves `st` ready for the first regular subproblem.
bool feasibility_phase(const ChannelSet& ch, const SystemParams& p, OsbdState& st, bool relay,
                       const TraceSink& trace) {
  OsbdState work = st;
  for (int k = 0; k < 30; ++k) {
    const OsbdProgram op = build_osbd_subproblem(ch, p, work, OsbdOptions{relay, true});
    const conic::Solution sol = conic::solve(op.program, subproblem_settings());
    if (trace)
      trace({{"phase", "feasibility"}, {"n", k + 1}, {"slack", -sol.objective}, {"status", to_string(sol.status)}});
    if (sol.status != conic::Status::optimal) return false;
    tighten(work, read_point(op, sol, p.n_1), op, p);
    if (-sol.objective <= 1e-7) {
      work.r_prev = st.r_prev;
      st = work;
      return true;
    }
    // A zero tangent point leaves rows with a positive constant unsatisfiable.
    for (double* v : {&work.xi, &work.phi1, &work.varphi2}) *v = std::max(*v, 1.0);
  }
  return false;
}

OsbdResult run_impl(const ChannelSet& ch, const SystemParams& p, bool relay, const TraceSink& trace) {
  const auto t0 = std::chrono::steady_clock::now();
  OsbdResult res;
  const SchemeMode mode = relay ? SchemeMode::osbd : SchemeMode::baseline_noma_no_eh;
  res.solution = BeamformingSolution::zeros(p, mode);
  res.state.r_prev = res.state.mu1 + res.state.mu2 - res.state.tau_s;

  OsbdPoint best;
  OsbdProgram last;
  bool have_point = false;
  int n = 0;
  while (n < p.sca_max_iters) {
    ++n;
    OsbdProgram op = build_osbd_subproblem(ch, p, res.state, OsbdOptions{relay});
    const conic::Solution sol = conic::solve(op.program, subproblem_settings());
    res.status = sol.status;
    if (sol.status != conic::Status::optimal) {
      if (trace) trace({{"n", n}, {"status", to_string(sol.status)}});
      if (have_point) break;
      res.certificate = sol;
      if (!res.restored && feasibility_phase(ch, p, res.state, relay, trace)) {
        res.restored = true;
        --n;
        continue;
      }
      res.iterations = n;
      res.message = "initial subproblem " + to_string(sol.status);
      res.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      return res;
    }
    best = read_point(op, sol, p.n_1);
    last = std::move(op);
    have_point = true;
    const double r = tighten(res.state, best, last, p);
    res.state.iteration = n;
    res.state.objective_trace.push_back(r);
    const double change = r - res.state.r_prev;
    res.state.r_prev = r;
    if (trace)
      trace({{"n", n}, {"R", r}, {"eta", res.state.eta}, {"objective", sol.objective},
             {"status", to_string(sol.status)}});
    if (change * change <= p.sca_tolerance) {
      res.converged = true;
      break;
    }
  }
  res.iterations = n;
  res.feasible = true;
  if (!res.converged && res.status == conic::Status::optimal) res.message = "iteration cap reached";

  const Normalized& nm = last.norm;
  BeamformingSolution bf = BeamformingSolution::zeros(p, mode);
  const RankOne r1 = extract_principal(best.v1), r2 = extract_principal(best.v2), rw = extract_principal(best.x);
  bf.v1 = std::sqrt(p.p_s_watts) * r1.vector;
  bf.v2 = std::sqrt(p.p_s_watts) * r2.vector;
  bf.w = std::sqrt(nm.w_scale) * rw.vector;
  bf.beta = relay ? std::clamp(best.beta, 0.0, std::min(1.0, p.beta_max)) : 0.0;
  if (relay) {
    // Back onto the null space exactly; the lift B X B^H is only accurate to rounding.
    const CMat& b = last.basis;
    bf.w = b * (b.adjoint() * bf.w);
  }
  clamp_w_to_budget(bf, ch, p);
  res.ranks = RankRatios{r1.ratio, r2.ratio, rw.ratio};

  if (res.ranks.worst() > 1e-4) {
    const CovarianceSolution cov{p.p_s_watts * best.v1, p.p_s_watts * best.v2, nm.w_scale * best.x};
    const auto check = [&](const BeamformingSolution& s) { return check_osbd_constraints(ch, s, p); };
    const auto repair = [&](BeamformingSolution& s) {
      if (relay) s.w = last.basis * (last.basis.adjoint() * s.w);
      clamp_w_to_budget(s, ch, p);
    };
    bf = gaussian_randomization(ch, p, cov, bf, check, repair, 100, ch.seed).solution;
  }
  res.solution = bf;
  res.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace

OsbdResult run_osbd(const ChannelSet& ch, const SystemParams& p, const TraceSink& trace) {
  if (p.n_1 <= p.n_e) throw DomainError("osbd: needs n_1 > n_e");
  return run_impl(ch, p, true, trace);
}

OsbdResult run_noma_without_eh(const ChannelSet& ch, const SystemParams& p, const TraceSink& trace) {
  return run_impl(ch, p, false, trace);
}

}  // namespace securebf
