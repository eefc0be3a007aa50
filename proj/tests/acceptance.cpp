// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Usage: securebf_acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "securebf/asbd.hpp"
#include "securebf/baselines.hpp"
#include "securebf/oracle.hpp"
#include "securebf/osbd.hpp"
#include "securebf/power_control.hpp"
#include "securebf/rng.hpp"
#include "securebf/sweep.hpp"

#ifndef SECUREBF_CLI_PATH
#define SECUREBF_CLI_PATH "securebf"
#endif

using namespace securebf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t instance_seed(std::uint64_t stream, int i) { return CounterRng::derive_key(stream, i); }

SystemParams scalar_params(double p_s_dbm) {
  SystemParams p;
  p.n_s = p.n_1 = p.n_2 = 1;
  p.p_s_watts = dbm_to_watts(p_s_dbm);
  return p;
}

bool non_decreasing(const std::vector<double>& t, double slack) {
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] < t[i - 1] - slack * std::max(1.0, std::abs(t[i - 1]))) return false;
  return true;
}

// Runs shared by criteria 1-4.
struct DefaultRuns {
  std::vector<ChannelSet> channels;
  std::vector<AsbdResult> asbd;
  std::vector<OsbdResult> osbd;
};

const DefaultRuns& default_runs() {
  static const DefaultRuns runs = [] {
    DefaultRuns r;
    const SystemParams p;
    const NetworkLayout layout = NetworkLayout::default_for(p.n_e);
    for (int i = 0; i < 100; ++i) {
      r.channels.push_back(generate_channel_set(p, layout, instance_seed(2, i)));
      r.asbd.push_back(run_asbd(r.channels.back(), p));
      r.osbd.push_back(run_osbd(r.channels.back(), p));
    }
    return r;
  }();
  return runs;
}

Outcome criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p;
  const NetworkLayout layout = NetworkLayout::default_for(p.n_e);
  CounterRng rng(instance_seed(1, 1u << 20));
  double worst_zf = 0.0, worst_null = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ChannelSet ch = generate_channel_set(p, layout, instance_seed(1, i));
    // AN exactly as the ASBD pipeline forms it: a positive multiple of the projector.
    const AsbdProgram ap = build_asbd_subproblem(ch, p, AsbdState{});
    const CMat sigma = (rng.uniform_open() * ap.norm.w_scale) * ap.projector;
    worst_zf = std::max(worst_zf, (ch.h_12 * sigma * ch.h_12.adjoint()).norm() / sigma.trace().real());
    // Relay beam in the span of the eavesdropper null basis.
    const OsbdProgram op = build_osbd_subproblem(ch, p, OsbdState{});
    CVec coeff(op.basis.cols());
    for (int k = 0; k < coeff.size(); ++k) coeff(k) = rng.complex_normal();
    const CVec w = op.basis * coeff;
    worst_null = std::max(worst_null, (ch.g_1e * w).norm() / w.norm());
  }
  const double construct_s = seconds_since(t0);
  // Outputs of the full pipelines.
  const DefaultRuns& runs = default_runs();
  double run_zf = 0.0, run_null = 0.0;
  for (std::size_t i = 0; i < runs.channels.size(); ++i) {
    const ChannelSet& ch = runs.channels[i];
    const auto& a = runs.asbd[i].solution;
    const double tr = a.sigma_an.trace().real();
    if (tr > 0.0) run_zf = std::max(run_zf, (ch.h_12 * a.sigma_an * ch.h_12.adjoint()).norm() / tr);
    const auto& o = runs.osbd[i].solution;
    if (o.w.norm() > 0.0) run_null = std::max(run_null, (ch.g_1e * o.w).norm() / o.w.norm());
  }
  Outcome out;
  out.pass = worst_zf <= 1e-9 && worst_null <= 1e-9 && run_zf <= 1e-9 && run_null <= 1e-9 && construct_s < 60.0;
  out.detail = fmt("1000 constructions: max |H12 S H12^H|/Tr S = %.2e, max |G1e w|/|w| = %.2e (%.1fs); "
                   "100 runs: %.2e, %.2e",
                   worst_zf, worst_null, construct_s, run_zf, run_null);
  return out;
}

Outcome criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const DefaultRuns& runs = default_runs();
  int a_mono = 0, a_stop = 0, o_mono = 0, o_stop = 0;
  for (std::size_t i = 0; i < runs.asbd.size(); ++i) {
    const auto& a = runs.asbd[i];
    const auto& o = runs.osbd[i];
    a_mono += non_decreasing(a.state.normalized_trace, 1e-6);
    o_mono += non_decreasing(o.state.objective_trace, 1e-6);
    a_stop += a.converged && a.iterations <= 30;
    o_stop += o.converged && o.iterations <= 30;
  }
  const int n = static_cast<int>(runs.asbd.size());
  Outcome out;
  out.pass = a_mono == n && o_mono == n && a_stop >= 95 && o_stop >= 95 && seconds_since(t0) < 600.0;
  out.detail = fmt("ASBD monotone %d/%d, stopped <= 30 it %d/%d; OSBD monotone %d/%d, stopped %d/%d (%.1fs)", a_mono,
                   n, a_stop, n, o_mono, n, o_stop, n, seconds_since(t0));
  return out;
}

Outcome criterion_3() {
  const DefaultRuns& runs = default_runs();
  const SystemParams p;
  int a_ok = 0, a_n = 0, o_ok = 0, o_n = 0;
  double a_worst = 0.0, o_worst = 0.0;
  for (std::size_t i = 0; i < runs.asbd.size(); ++i) {
    if (runs.asbd[i].feasible) {
      ++a_n;
      const double v = check_asbd_constraints(runs.channels[i], runs.asbd[i].solution, p).worst();
      a_worst = std::max(a_worst, v);
      a_ok += v <= 1e-6;
    }
    if (runs.osbd[i].feasible) {
      ++o_n;
      const double v = check_osbd_constraints(runs.channels[i], runs.osbd[i].solution, p).worst();
      o_worst = std::max(o_worst, v);
      o_ok += v <= 1e-6;
    }
  }
  const SystemParams sp = scalar_params(40.0);
  const NetworkLayout layout = NetworkLayout::default_for(sp.n_e);
  int c_ok = 0, c_n = 0;
  double c_worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ChannelSet ch = generate_channel_set(sp, layout, instance_seed(3, i));
    const PowerControlResult r = run_power_control(ch, sp);
    if (!r.feasible) continue;
    ++c_n;
    const double v = check_power_control_constraints(ch, r.solution, sp).worst();
    c_worst = std::max(c_worst, v);
    c_ok += v <= 1e-6;
  }
  Outcome out;
  out.pass = a_n > 0 && o_n > 0 && c_n > 0 && a_ok == a_n && o_ok == o_n && c_ok == c_n;
  out.detail = fmt("returned solutions within 1e-6: ASBD %d/%d (worst %.1e), OSBD %d/%d (%.1e), "
                   "power control %d/%d (%.1e)",
                   a_ok, a_n, a_worst, o_ok, o_n, o_worst, c_ok, c_n, c_worst);
  return out;
}

Outcome criterion_4() {
  const DefaultRuns& runs = default_runs();
  int converged = 0, rank_one = 0, flagged = 0;
  auto tally = [&](const SchemeOutcome& r) {
    if (!r.converged || !r.feasible) return;
    ++converged;
    if (r.ranks.worst() <= 1e-4)
      ++rank_one;
    else if (r.solution.randomized)
      ++flagged;
  };
  for (const auto& r : runs.asbd) tally(r);
  for (const auto& r : runs.osbd) tally(r);
  Outcome out;
  out.pass = converged > 0 && rank_one >= 0.95 * converged && rank_one + flagged == converged;
  out.detail = fmt("ratio <= 1e-4 on %d/%d converged runs, %d others flagged randomized", rank_one, converged, flagged);
  return out;
}

Outcome criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  SystemParams p;
  p.n_s = p.n_1 = 2;
  p.n_2 = 1;
  p.n_e = 1;
  const NetworkLayout layout = NetworkLayout::default_for(p.n_e);
  GridSpec spec;
  spec.resolution = 6;
  spec.direction_samples = 48;
  int a_ok = 0, o_ok = 0;
  double a_gap = 0.0, o_gap = 0.0;
  for (int i = 0; i < 20; ++i) {
    const ChannelSet ch = restrict_to_real(generate_channel_set(p, layout, instance_seed(5, i)));
    const GridResult ga = grid_search_ssr(ch, p, spec, OracleMode::asbd);
    const GridResult go = grid_search_ssr(ch, p, spec, OracleMode::osbd);
    const AsbdResult a = run_asbd(ch, p);
    const OsbdResult o = run_osbd(ch, p);
    const double sa = a.feasible ? secrecy_sum_rate(ch, a.solution, p).ssr : 0.0;
    const double so = o.feasible ? secrecy_sum_rate(ch, o.solution, p).ssr : 0.0;
    const double ba = ga.found_feasible ? ga.best_ssr : 0.0;
    const double bo = go.found_feasible ? go.best_ssr : 0.0;
    a_ok += sa >= ba - 0.05;
    o_ok += so >= bo - 0.05;
    a_gap = std::max(a_gap, ba - sa);
    o_gap = std::max(o_gap, bo - so);
  }
  const SystemParams sp = scalar_params(40.0);
  const NetworkLayout sl = NetworkLayout::default_for(sp.n_e);
  int pc_ok = 0, pc_feasible = 0;
  double pc_worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const ChannelSet ch = generate_channel_set(sp, sl, instance_seed(55, i));
    const PowerControlResult r = run_power_control(ch, sp);
    const PowerControlOracle o = brute_force_power_control(ch, sp, 1e-4);
    if (r.feasible != o.found_feasible) continue;
    if (!r.feasible) {
      ++pc_ok;
      continue;
    }
    ++pc_feasible;
    const double d = std::abs(r.objective - o.best_objective);
    pc_worst = std::max(pc_worst, d);
    pc_ok += d <= 1e-3 && r.objective >= o.grid2d_objective - 1e-3;
  }
  Outcome out;
  out.pass = a_ok == 20 && o_ok == 20 && pc_ok == 50 && seconds_since(t0) < 900.0;
  out.detail = fmt("N_s=N_1=2, N_2=N_e=1, real: ASBD >= grid-0.05 on %d/20 (max shortfall %.3f), OSBD %d/20 (%.3f); "
                   "power control within 1e-3 on %d/50 (%d feasible, worst %.1e) (%.0fs)",
                   a_ok, a_gap, o_ok, o_gap, pc_ok, pc_feasible, pc_worst, seconds_since(t0));
  return out;
}

// ---- criterion 6 -------------------------------------------------------

struct PairedTest {
  double mean_diff = 0.0;
  double t = 0.0;
  bool significant = false;
};

/// One-sided paired t-test of mean(x - y) > 0 at the 5% level.
PairedTest paired_greater(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  PairedTest r;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] - y[i];
  r.mean_diff = sum / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) ss += (x[i] - y[i] - r.mean_diff) * (x[i] - y[i] - r.mean_diff);
  const double sd = std::sqrt(ss / (n - 1));
  if (sd == 0.0) {
    r.t = r.mean_diff > 0.0 ? INFINITY : 0.0;
    r.significant = r.mean_diff > 0.0;
    return r;
  }
  r.t = r.mean_diff / (sd / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  r.significant = r.t > boost::math::quantile(dist, 0.95);
  return r;
}

std::vector<double> samples_of(const SweepResult& res, Scheme s, double value) {
  for (const auto& row : res.rows)
    if (row.scheme == s && row.value == value) {
      std::vector<double> out;
      for (const auto& v : row.samples) out.push_back(v.value_or(0.0));
      return out;
    }
  return {};
}

struct Comparison {
  std::string label;
  PairedTest test;
};

std::string describe(const std::vector<Comparison>& cs, bool& all) {
  std::string s;
  for (const auto& c : cs) {
    all = all && c.test.significant;
    s += fmt("%s%s d=%.3f t=%.2f%s", s.empty() ? "" : "; ", c.label.c_str(), c.test.mean_diff, c.test.t,
             c.test.significant ? "" : " (ns)");
  }
  return s;
}

SweepConfig trend_config(std::vector<Scheme> schemes, SweepParam param, std::vector<double> values) {
  SweepConfig c;
  c.schemes = std::move(schemes);
  c.param = param;
  c.values = std::move(values);
  c.realizations = 100;
  c.seed = 6;
  c.workers = 1;
  return c;
}

Outcome criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> parts;
  bool all = true;

  {  // (a) P_s sweep
    const std::vector<double> ps{20, 25, 30, 35, 40};
    const SweepResult r = run_sweep(trend_config({Scheme::asbd, Scheme::without_an}, SweepParam::p_s_dbm, ps));
    std::vector<Comparison> cs;
    for (double v : ps)
      cs.push_back({fmt("%gdBm", v), paired_greater(samples_of(r, Scheme::asbd, v), samples_of(r, Scheme::without_an, v))});
    parts.push_back("(a) ASBD > without-AN: " + describe(cs, all));
  }
  {  // (b) antenna counts
    const SweepResult r1 = run_sweep(trend_config({Scheme::asbd}, SweepParam::n_1, {2, 4}));
    const SweepResult rs = run_sweep(trend_config({Scheme::osbd}, SweepParam::n_s, {2, 4}));
    std::vector<Comparison> cs{
        {"ASBD N_1 4>2", paired_greater(samples_of(r1, Scheme::asbd, 4), samples_of(r1, Scheme::asbd, 2))},
        {"OSBD N_s 4>2", paired_greater(samples_of(rs, Scheme::osbd, 4), samples_of(rs, Scheme::osbd, 2))}};
    parts.push_back("(b) " + describe(cs, all));
  }
  {  // (c) rate threshold of D1
    const SweepResult r = run_sweep(trend_config({Scheme::asbd}, SweepParam::r_1, {10, 100, 1000}));
    std::vector<Comparison> cs{
        {"r_1 100>10", paired_greater(samples_of(r, Scheme::asbd, 100), samples_of(r, Scheme::asbd, 10))},
        {"r_1 1000>100", paired_greater(samples_of(r, Scheme::asbd, 1000), samples_of(r, Scheme::asbd, 100))}};
    parts.push_back("(c) " + describe(cs, all));
  }
  {  // (d) ordering at the default point
    const SweepResult r =
        run_sweep(trend_config({Scheme::osbd, Scheme::noma_wo_eh, Scheme::oma_wo_eh}, SweepParam::p_s_dbm, {30}));
    std::vector<Comparison> cs{
        {"OSBD>NOMA-wo-EH", paired_greater(samples_of(r, Scheme::osbd, 30), samples_of(r, Scheme::noma_wo_eh, 30))},
        {"NOMA-wo-EH>OMA-wo-EH",
         paired_greater(samples_of(r, Scheme::noma_wo_eh, 30), samples_of(r, Scheme::oma_wo_eh, 30))}};
    parts.push_back("(d) " + describe(cs, all));
  }
  {  // (e) single-antenna power control at high P_s
    SweepConfig c = trend_config({Scheme::power_control, Scheme::noma_wo_eh, Scheme::oma_wo_eh, Scheme::oma_w_eh},
                                 SweepParam::p_s_dbm, {40, 50});
    c.scenario.params.n_s = c.scenario.params.n_1 = c.scenario.params.n_2 = 1;
    const SweepResult r = run_sweep(c);
    std::vector<Comparison> cs;
    for (double v : {40.0, 50.0})
      for (Scheme b : {Scheme::noma_wo_eh, Scheme::oma_wo_eh, Scheme::oma_w_eh})
        cs.push_back({fmt("%gdBm vs %s", v, to_string(b).c_str()),
                      paired_greater(samples_of(r, Scheme::power_control, v), samples_of(r, b, v))});
    parts.push_back("(e) power control > baselines: " + describe(cs, all));
  }
  Outcome out;
  out.pass = all && seconds_since(t0) < 1800.0;
  out.detail = fmt("100 paired realizations, one-sided t at 5%% (%.0fs)", seconds_since(t0));
  for (const auto& p : parts) out.detail += "\n    " + p;
  return out;
}

// ---- criterion 7 -------------------------------------------------------

struct KnownProgram {
  conic::Program prog;
  double optimum = 0.0;
};

/// max sum c_i X_ii  s.t. X_ii <= u_i, X PSD: optimum sum max(c_i, 0) u_i.
KnownProgram diagonal_sdp(CounterRng& rng) {
  KnownProgram k;
  const int n = 1 + static_cast<int>(rng.uniform() * 4);
  const auto& x = k.prog.add_hermitian("X", n);
  CMat c = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    c(i, i) = 4.0 * rng.uniform() - 1.0;
    const double u = 0.1 + 2.0 * rng.uniform();
    k.prog.add_nonneg(u - conic::LinExpr::var(x.diag_index(i)), "cap");
    k.optimum += std::max(c(i, i).real(), 0.0) * u;
  }
  k.prog.maximize(conic::Program::trace_product(x, c));
  return k;
}

/// max Tr(C X)  s.t. Tr X <= t, X PSD, with C = U diag(c) U^H: optimum t max(max c, 0).
KnownProgram rotated_sdp(CounterRng& rng) {
  KnownProgram k;
  const int n = 2 + static_cast<int>(rng.uniform() * 3);
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  const CMat u = Eigen::HouseholderQR<CMat>(g).householderQ();
  RVec c(n);
  for (int i = 0; i < n; ++i) c(i) = 2.0 * rng.uniform() - 0.5;
  const CMat cm = u * c.cast<cplx>().asDiagonal() * u.adjoint();
  const double t = 0.5 + rng.uniform();
  const auto& x = k.prog.add_hermitian("X", n);
  k.prog.add_nonneg(t - conic::Program::trace(x), "trace");
  k.prog.maximize(conic::Program::trace_product(x, cm));
  k.optimum = t * std::max(c.maxCoeff(), 0.0);
  return k;
}

/// max c'x  s.t. sum x = s, 0 <= x_i <= u_i, solved greedily. Half the
/// instances put x on the diagonal of a PSD block instead of free scalars.
KnownProgram embedded_lp(CounterRng& rng) {
  KnownProgram k;
  const int n = 2 + static_cast<int>(rng.uniform() * 4);
  const bool in_block = rng.uniform() < 0.5;
  std::vector<int> idx(n);
  if (in_block) {
    const auto& b = k.prog.add_hermitian("D", n);
    for (int i = 0; i < n; ++i) idx[i] = b.diag_index(i);
  } else {
    for (int i = 0; i < n; ++i) idx[i] = k.prog.add_scalar(fmt("x%d", i));
  }
  std::vector<double> c(n), u(n);
  double cap = 0.0;
  conic::LinExpr sum, obj;
  for (int i = 0; i < n; ++i) {
    c[i] = 2.0 * rng.uniform() - 1.0;
    u[i] = 0.2 + rng.uniform();
    cap += u[i];
    const auto xi = conic::LinExpr::var(idx[i]);
    if (!in_block) k.prog.add_nonneg(xi, "lo");
    k.prog.add_nonneg(u[i] - xi, "hi");
    sum += xi;
    obj += c[i] * xi;
  }
  const double s = cap * (0.1 + 0.8 * rng.uniform());
  k.prog.add_equality(sum - s, "budget");
  k.prog.maximize(obj);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return c[a] > c[b]; });
  double left = s;
  for (int i : order) {
    const double take = std::min(left, u[i]);
    k.optimum += c[i] * take;
    left -= take;
  }
  return k;
}

Outcome criterion_7() {
  CounterRng rng(instance_seed(7, 0));
  int solved = 0;
  double worst_obj = 0.0, worst_kkt = 0.0;
  std::map<std::string, int> misses;
  for (int i = 0; i < 1000; ++i) {
    KnownProgram k = i % 3 == 0 ? diagonal_sdp(rng) : i % 3 == 1 ? rotated_sdp(rng) : embedded_lp(rng);
    const conic::StandardForm sf = k.prog.to_standard_form();
    const conic::Solution sol = conic::solve(sf);
    const conic::Certificate cert = conic::audit(sf, sol);
    const double err = std::abs(sol.objective - k.optimum);
    const double kkt = std::max({cert.primal_residual, cert.dual_residual, std::abs(cert.gap) / (1.0 + std::abs(sol.objective))});
    worst_obj = std::max(worst_obj, err);
    worst_kkt = std::max(worst_kkt, kkt);
    if (sol.status == conic::Status::optimal && err <= 1e-6 && kkt <= 1e-7)
      ++solved;
    else
      ++misses[conic::to_string(sol.status)];
  }
  // Unreachable SINR targets.
  int certified = 0, optimal_claims = 0, builds = 0;
  const NetworkLayout layout = NetworkLayout::default_for(3);
  for (int i = 0; i < 10; ++i) {
    SystemParams p;
    p.gamma = 1e9;
    const ChannelSet ch = generate_channel_set(p, layout, instance_seed(77, i));
    const AsbdProgram ap = build_asbd_subproblem(ch, p, AsbdState{});
    const OsbdProgram op = build_osbd_subproblem(ch, p, OsbdState{});
    for (const conic::Program* prog : {&ap.program, &op.program}) {
      ++builds;
      const conic::Solution sol = conic::solve(*prog, subproblem_settings());
      certified += sol.status == conic::Status::infeasible;
      optimal_claims += sol.status == conic::Status::optimal;
    }
  }
  Outcome out;
  out.pass = solved == 1000 && certified == builds && optimal_claims == 0;
  out.detail = fmt("1000 known-optimum programs: %d solved (max |obj err| %.1e, max KKT %.1e); "
                   "gamma=1e9 builds: %d/%d certified infeasible, %d claimed optimal",
                   solved, worst_obj, worst_kkt, certified, builds, optimal_claims);
  for (const auto& [status, n] : misses) out.detail += fmt(" [%d %s]", n, status.c_str());
  return out;
}

// ---- criterion 8 -------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome criterion_8() {
  const std::string dir = "acceptance_cli";
  std::filesystem::create_directories(dir);
  const std::vector<std::string> invocations{
      "--scheme asbd,without-an --sweep p_s_dbm=25,30 --realizations 3 --seed 17",
      "--scheme osbd,noma-wo-eh,oma-wo-eh --sweep n_s=2,4 --realizations 3 --seed 17 --workers 2",
      "--scheme oma-w-an --sweep gamma=2,3 --realizations 2 --seed 5"};
  int identical = 0;
  std::string why;
  for (std::size_t i = 0; i < invocations.size(); ++i) {
    std::string prev;
    bool same = true;
    for (int rep = 0; rep < 2; ++rep) {
      const std::string out = fmt("%s/run%zu_%d.csv", dir.c_str(), i, rep);
      const std::string cmd = std::string(SECUREBF_CLI_PATH) + " " + invocations[i] + " --out " + out;
      if (std::system(cmd.c_str()) != 0) {
        same = false;
        why = "exit status of: " + cmd;
        break;
      }
      const std::string text = slurp(out);
      if (text.empty()) same = false;
      if (rep == 1 && text != prev) same = false;
      prev = text;
    }
    identical += same;
  }
  Outcome out;
  out.pass = identical == static_cast<int>(invocations.size());
  out.detail = fmt("%d/%zu CLI invocations byte-identical on repeat", identical, invocations.size());
  if (!why.empty()) out.detail += " (" + why + ")";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                      criterion_5, criterion_6, criterion_7, criterion_8};
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!chosen.empty() && !chosen.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
