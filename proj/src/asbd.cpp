#include "securebf/asbd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "securebf/randomization.hpp"

namespace securebf {

using conic::LinExpr;
using conic::Program;

AsbdProgram build_asbd_subproblem(const ChannelSet& ch, const SystemParams& p, const AsbdState& st,
                                  const AsbdOptions& opt) {
  p.validate();
  ch.validate(p);
  for (double v : {st.theta1, st.psi1, st.phi1, st.omega1, st.varphi1})
    if (!std::isfinite(v)) throw DomainError("asbd: non-finite linearization point");

  AsbdProgram out;
  out.norm = Normalized::from(ch, p);
  out.projector = null_space_projector(ch.h_12);
  out.trace_p = out.projector.trace().real();
  out.with_an = opt.with_an && out.trace_p > 0.5;
  const Normalized& nm = out.norm;
  Program& prog = out.program;

  out.v1 = prog.add_hermitian("V1", p.n_s);
  out.v2 = prog.add_hermitian("V2", p.n_s);
  out.w = prog.add_hermitian("W", p.n_1);
  if (out.with_an) out.q = prog.add_scalar("q");
  out.beta = prog.add_scalar("beta");
  out.theta = prog.add_scalar("theta");
  out.psi = prog.add_scalar("psi");
  out.phi = prog.add_scalar("phi");
  out.omega = prog.add_scalar("omega");
  out.varphi = prog.add_scalar("varphi");

  const LinExpr beta = prog.scalar(out.beta);
  const LinExpr a11 = Program::trace_product(out.v1, nm.a1);
  const LinExpr a12 = Program::trace_product(out.v2, nm.a1);
  const LinExpr a21 = Program::trace_product(out.v1, nm.a2);
  const LinExpr a22 = Program::trace_product(out.v2, nm.a2);
  const LinExpr b12 = Program::trace_product(out.w, nm.b12);
  LinExpr relay_load = Program::trace(out.w);
  if (out.with_an) {
    prog.add_nonneg(prog.scalar(out.q), "an-scale");
    relay_load += out.trace_p * prog.scalar(out.q);
  }

  prog.add_nonneg(beta, "beta-lower");
  prog.add_nonneg(std::min(p.beta_max, 1.0) - beta, "beta-upper");
  prog.add_nonneg(1.0 - Program::trace(out.v1) - Program::trace(out.v2), "transmit-power");

  const double g = p.gamma;
  prog.add_lmi(conic::schur_2x2(1.0 - beta, prog.scalar(out.theta), a11, "rate-d1"));
  prog.add_lmi(conic::schur_2x2(b12, prog.scalar(out.psi), a21, "rate-d2"));
  prog.add_lmi(conic::schur_2x2(1.0 - beta, prog.scalar(out.phi), a12 - g * a11, "sic-d1"));
  prog.add_lmi(conic::schur_2x2(b12, prog.scalar(out.omega), a21, "qos-d2"));
  prog.add_lmi(conic::schur_2x2(beta, prog.scalar(out.varphi), nm.c_tau * (a11 + a12), "energy-harvesting"));

  const std::pair<LinExpr, const char*> rows[] = {
      {square_minorant(st.theta1, prog.scalar(out.theta)) - (p.r_1 - 1.0), "rate-d1-sca"},
      {square_minorant(st.psi1, prog.scalar(out.psi)) - ((p.r_2 - 1.0) * a21 + (p.r_2 - 1.0) - a22 - b12),
       "rate-d2-sca"},
      {square_minorant(st.phi1, prog.scalar(out.phi)) - g, "sic-d1-sca"},
      {square_minorant(st.omega1, prog.scalar(out.omega)) - (g * a21 - b12 - a22 + g), "qos-d2-sca"},
      {square_minorant(st.varphi1, prog.scalar(out.varphi)) - nm.kappa_w * relay_load, "energy-harvesting-sca"},
  };
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
  } else {
    for (const auto& [row, label] : rows) prog.add_nonneg(row, label);
    prog.maximize(out.with_an ? out.trace_p * prog.scalar(out.q) : b12);
  }
  return out;
}

namespace {

/// Subproblem point in normalized units.
struct AsbdPoint {
  CMat v1, v2, w;
  double q = 0.0;
  double beta = 0.0;
  double objective = 0.0;
};

AsbdPoint read_point(const AsbdProgram& ap, const conic::Solution& sol) {
  AsbdPoint pt;
  pt.v1 = sol.value(ap.v1);
  pt.v2 = sol.value(ap.v2);
  pt.w = sol.value(ap.w);
  pt.q = ap.with_an ? std::max(0.0, sol.x[ap.q]) : 0.0;
  pt.beta = sol.x[ap.beta];
  pt.objective = sol.objective;
  return pt;
}

/// Linearization points where every surrogate is tight at `pt`.
void tighten(AsbdState& st, const AsbdPoint& pt, const Normalized& nm, const SystemParams& p) {
  auto tr = [](const CMat& a, const CMat& x) { return (a * x).trace().real(); };
  const double a11 = tr(nm.a1, pt.v1), a12 = tr(nm.a1, pt.v2), a21 = tr(nm.a2, pt.v1);
  const double b12 = tr(nm.b12, pt.w);
  const double keep = 1.0 - pt.beta;
  auto root = [](double v) { return std::sqrt(std::max(0.0, v)); };
  st.theta1 = root(keep * a11);
  st.psi1 = root(b12 * a21);
  st.phi1 = root(keep * (a12 - p.gamma * a11));
  st.omega1 = st.psi1;
  st.varphi1 = root(pt.beta * nm.c_tau * (a11 + a12));
}

/// Sigma is only limited by the harvested budget; shrink it onto the budget.
void clamp_an_to_budget(BeamformingSolution& s, const ChannelSet& ch, const SystemParams& p) {
  const double tr = s.sigma_an.trace().real();
  if (tr <= 0.0) return;
  const double room = relay_power_budget(ch, s, p) - s.w.squaredNorm();
  if (room < tr) s.sigma_an *= std::max(0.0, room) / tr;
}

bool feasibility_phase(const ChannelSet& ch, const SystemParams& p, AsbdState& st, bool with_an,
                       const TraceSink& trace) {
  AsbdState work;
  for (int k = 0; k < 30; ++k) {
    const AsbdProgram ap = build_asbd_subproblem(ch, p, work, AsbdOptions{with_an, true});
    const conic::Solution sol = conic::solve(ap.program, subproblem_settings());
    if (trace)
      trace({{"phase", "feasibility"}, {"n", k + 1}, {"slack", -sol.objective}, {"status", to_string(sol.status)}});
    if (sol.status != conic::Status::optimal) return false;
    tighten(work, read_point(ap, sol), ap.norm, p);
    if (-sol.objective <= 1e-7) {
      st.theta1 = work.theta1;
      st.psi1 = work.psi1;
      st.phi1 = work.phi1;
      st.omega1 = work.omega1;
      st.varphi1 = work.varphi1;
      return true;
    }
  }
  return false;
}

AsbdResult run_impl(const ChannelSet& ch, const SystemParams& p, bool with_an, const TraceSink& trace) {
  const auto t0 = std::chrono::steady_clock::now();
  AsbdResult res;
  const SchemeMode mode = with_an ? SchemeMode::asbd : SchemeMode::baseline_without_an;
  res.solution = BeamformingSolution::zeros(p, mode);

  AsbdPoint best;
  bool have_point = false;
  Normalized nm;
  CMat projector;
  bool an_active = false;
  double prev = 0.0;
  int n = 0;
  while (n < p.sca_max_iters) {
    ++n;
    const AsbdProgram ap = build_asbd_subproblem(ch, p, res.state, AsbdOptions{with_an, false});
    const conic::Solution sol = conic::solve(ap.program, subproblem_settings());
    res.status = sol.status;
    if (sol.status != conic::Status::optimal) {
      if (trace) trace({{"n", n}, {"status", to_string(sol.status)}});
      if (have_point) break;
      res.certificate = sol;
      if (!res.restored && feasibility_phase(ch, p, res.state, with_an, trace)) {
        res.restored = true;
        --n;
        continue;
      }
      res.iterations = n;
      res.message = "initial subproblem " + to_string(sol.status);
      res.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      return res;
    }
    best = read_point(ap, sol);
    nm = ap.norm;
    projector = ap.projector;
    an_active = ap.with_an;
    have_point = true;
    tighten(res.state, best, nm, p);

    const double sigma_tr = best.q * nm.w_scale * ap.trace_p;
    const double objective = an_active ? best.q * ap.trace_p : best.objective / (1.0 + std::abs(best.objective));
    res.state.iteration = n;
    res.state.delta = std::abs(objective - prev);
    res.state.objective_trace.push_back(sigma_tr);
    res.state.normalized_trace.push_back(an_active ? objective : best.objective);
    prev = objective;
    if (trace)
      trace({{"n", n}, {"delta", res.state.delta}, {"trace_sigma", sigma_tr}, {"objective", best.objective},
             {"status", to_string(sol.status)}});
    if (res.state.delta < p.sca_tolerance) {
      res.converged = true;
      break;
    }
  }
  res.iterations = n;
  res.feasible = true;
  if (!res.converged && res.status == conic::Status::optimal) res.message = "iteration cap reached";

  BeamformingSolution bf = BeamformingSolution::zeros(p, mode);
  const RankOne r1 = extract_principal(best.v1), r2 = extract_principal(best.v2), rw = extract_principal(best.w);
  bf.v1 = std::sqrt(p.p_s_watts) * r1.vector;
  bf.v2 = std::sqrt(p.p_s_watts) * r2.vector;
  bf.w = std::sqrt(nm.w_scale) * rw.vector;
  bf.beta = std::clamp(best.beta, 0.0, std::min(1.0, p.beta_max));
  if (an_active) bf.sigma_an = (best.q * nm.w_scale) * projector;
  clamp_an_to_budget(bf, ch, p);
  res.ranks = RankRatios{r1.ratio, r2.ratio, rw.ratio};

  if (res.ranks.worst() > 1e-4) {
    const CovarianceSolution cov{p.p_s_watts * best.v1, p.p_s_watts * best.v2, nm.w_scale * best.w};
    const auto check = [&](const BeamformingSolution& s) { return check_asbd_constraints(ch, s, p); };
    const auto repair = [&](BeamformingSolution& s) { clamp_an_to_budget(s, ch, p); };
    bf = gaussian_randomization(ch, p, cov, bf, check, repair, 100, ch.seed).solution;
  }
  res.solution = bf;
  res.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace

AsbdResult run_asbd(const ChannelSet& ch, const SystemParams& p, const TraceSink& trace) {
  return run_impl(ch, p, true, trace);
}

AsbdResult run_asbd_without_an(const ChannelSet& ch, const SystemParams& p, const TraceSink& trace) {
  return run_impl(ch, p, false, trace);
}

}  // namespace securebf
