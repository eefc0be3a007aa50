#include "securebf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <tuple>

#include <Eigen/SVD>

namespace securebf {

void GridSpec::validate() const {
  if (resolution < 2) throw DomainError("grid resolution must be >= 2");
  if (direction_samples < 1) throw DomainError("direction_samples must be >= 1");
  if (random_directions < 0) throw DomainError("random_directions must be >= 0");
  if (workers < 0) throw DomainError("workers must be >= 0");
}

namespace {

double frac(double x) { return x - std::floor(x); }

/// Fixes the global phase so the first non-negligible entry is real >= 0.
CVec phase_fixed(CVec v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      break;
    }
  }
  return v;
}

/// Orthonormal basis of null(m) from a full SVD.
CMat null_basis(const CMat& m) {
  const int n = static_cast<int>(m.cols());
  if (m.rows() == 0) return CMat::Identity(n, n);
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = std::max(m.rows(), m.cols()) * std::numeric_limits<double>::epsilon() *
                     (sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

int worker_count(const GridSpec& spec) {
  if (spec.workers > 0) return spec.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> unit_grid(int resolution, bool include_zero) {
  std::vector<double> g;
  for (int i = include_zero ? 0 : 1; i <= resolution; ++i) g.push_back(static_cast<double>(i) / resolution);
  return g;
}

}  // namespace

std::vector<CVec> direction_set(int dim, int count, int random_count, std::uint64_t seed) {
  if (dim < 1) throw DomainError("direction dimension must be >= 1");
  std::vector<CVec> out;
  if (dim == 1) {
    out.push_back(CVec::Ones(1));
    return out;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  if (dim == 2) {
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double theta = std::acos(std::clamp(z, -1.0, 1.0));
      const double phi = golden_angle * i;
      CVec v(2);
      v << std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi);
      out.push_back(v);
    }
  } else if (dim == 3) {
    // Kronecker sequence with the plastic-type root of x^5 = x + 1.
    const double g = 1.1673039782614187;
    double alpha[4];
    for (int j = 0; j < 4; ++j) alpha[j] = frac(1.0 / std::pow(g, j + 1));
    for (int i = 0; i < count; ++i) {
      double u[4];
      for (int j = 0; j < 4; ++j) u[j] = frac(0.5 + alpha[j] * (i + 1));
      const double s = std::sqrt(u[0]);
      const double x1 = 1.0 - s, x2 = s * (1.0 - u[1]), x3 = s * u[1];
      CVec v(3);
      v << std::sqrt(x1), std::polar(std::sqrt(x2), two_pi * u[2]), std::polar(std::sqrt(x3), two_pi * u[3]);
      out.push_back(phase_fixed(v));
    }
  } else {
    random_count += count;
  }
  CounterRng rng(CounterRng::derive_key(seed, 0x4f52), 0);
  for (int i = 0; i < random_count; ++i) {
    CVec v(dim);
    for (int j = 0; j < dim; ++j) v(j) = rng.complex_normal();
    out.push_back(phase_fixed(v / v.norm()));
  }
  return out;
}

double grid_search_cost(const SystemParams& p, const GridSpec& spec, OracleMode mode) {
  const double r = spec.resolution;
  const double nv = p.n_s == 1 ? 1.0 : spec.direction_samples + spec.random_directions;
  const int wdim = mode == OracleMode::osbd ? std::max(0, p.n_1 - p.n_e) : p.n_1;
  const double nw = wdim <= 1 ? 1.0 : spec.direction_samples + spec.random_directions;
  // directions^2 * power share * total power * beta * w directions * w share
  return nv * nv * (r + 1) * r * (r + 1) * nw * (r + 1);
}

GridResult grid_search_ssr(const ChannelSet& ch, const SystemParams& p, const GridSpec& spec, OracleMode mode) {
  spec.validate();
  p.validate();
  ch.validate(p);
  const double cost = grid_search_cost(p, spec, mode);
  if (p.n_s > 2 || p.n_1 > 3)
    throw OracleCostError("grid search needs n_s <= 2 and n_1 <= 3; estimated " + std::to_string(cost) +
                              " evaluations",
                          cost);

  const auto vdirs = direction_set(p.n_s, spec.direction_samples, spec.random_directions, spec.seed);
  struct VGain {
    double s1, s2, se;
  };
  std::vector<VGain> vg;
  for (const auto& d : vdirs)
    vg.push_back({(ch.h_s1 * d).squaredNorm(), (ch.h_s2 * d).squaredNorm(), (ch.g_se * d).squaredNorm()});

  // Relay beam candidates, as full N1 vectors.
  std::vector<CVec> wdirs;
  CMat an_cov_unit;  // AN covariance per watt, ASBD only
  if (mode == OracleMode::asbd) {
    wdirs = direction_set(p.n_1, spec.direction_samples, spec.random_directions, spec.seed + 1);
    const CMat b = null_basis(ch.h_12);
    if (b.cols() > 0) an_cov_unit = (b * b.adjoint()) / static_cast<double>(b.cols());
  } else {
    const CMat b = null_basis(ch.g_1e);
    if (b.cols() > 0)
      for (const auto& d : direction_set(static_cast<int>(b.cols()), spec.direction_samples, spec.random_directions,
                                         spec.seed + 1))
        wdirs.push_back(b * d);
  }
  struct WGain {
    double d2, e;
  };
  std::vector<WGain> wg;
  for (const auto& d : wdirs) wg.push_back({(ch.h_12 * d).squaredNorm(), (ch.g_1e * d).squaredNorm()});
  double an_d2 = 0.0, an_e = 0.0;
  if (an_cov_unit.size()) {
    an_d2 = std::max(0.0, (ch.h_12 * an_cov_unit * ch.h_12.adjoint()).trace().real());
    an_e = std::max(0.0, (ch.g_1e * an_cov_unit * ch.g_1e.adjoint()).trace().real());
  }
  const bool has_an = an_cov_unit.size() > 0;

  const auto shares = unit_grid(spec.resolution, true);
  const auto totals = unit_grid(spec.resolution, false);
  std::vector<double> betas = unit_grid(spec.resolution, true);
  for (double& b : betas) b *= std::min(1.0, p.beta_max);
  const double c_tau = p.tau / (1.0 - p.tau);
  const int nv = static_cast<int>(vg.size());

  struct Best {
    bool found = false;
    double ssr = -1.0;
    int i1 = 0, i2 = 0, iw = -1;
    double total = 0, share = 0, beta = 0, wshare = 0;
    double evals = 0;
  };
  auto search_rows = [&](int worker, int stride) {
    Best best;
    for (int i1 = worker; i1 < nv; i1 += stride) {
      for (int i2 = 0; i2 < nv; ++i2) {
        for (double total : totals) {
          for (double share : shares) {
            const double p1 = total * share * p.p_s_watts, p2 = total * (1.0 - share) * p.p_s_watts;
            LinkPowers lp;
            lp.s1_v1 = p1 * vg[i1].s1;
            lp.s1_v2 = p2 * vg[i2].s1;
            lp.s2_v1 = p1 * vg[i1].s2;
            lp.s2_v2 = p2 * vg[i2].s2;
            lp.eve_v = p1 * vg[i1].se + p2 * vg[i2].se;
            lp.v_power = p1 + p2;
            lp.eve_v2 = p2 * vg[i2].se;
            lp.v2_power = p2;
            for (double beta : betas) {
              const double budget = beta * (lp.s1_v1 + lp.s1_v2) * c_tau;
              // Phase-A screens that no relay choice can repair.
              const RateReport pa = secrecy_sum_rate(lp, beta, p);
              if (pa.sinr_1_s2 < p.gamma) continue;
              if (mode == OracleMode::asbd && 1.0 + pa.snr_1_s1 < p.r_1) continue;
              const int nw = budget > 0.0 ? static_cast<int>(wg.size()) : 0;
              for (int iw = -1; iw < nw; ++iw) {
                for (double wshare : shares) {
                  if (iw < 0 && wshare > 0.0) break;  // w = 0 candidate once
                  if (iw >= 0 && wshare == 0.0) continue;
                  LinkPowers c = lp;
                  const double pw = iw >= 0 ? wshare * budget : 0.0;
                  if (iw >= 0) {
                    c.d2_w = pw * wg[iw].d2;
                    c.eve_w = pw * wg[iw].e;
                    c.w_power = pw;
                  }
                  if (mode == OracleMode::asbd && has_an) {
                    const double pa_an = std::max(0.0, budget - pw);
                    c.d2_an = pa_an * an_d2;
                    c.eve_an = pa_an * an_e;
                    c.an_power = pa_an;
                  }
                  ++best.evals;
                  const double worst = mode == OracleMode::asbd ? asbd_worst_violation(c, beta, p)
                                                                : osbd_worst_violation(c, beta, p);
                  if (worst > 1e-9) continue;
                  const double ssr = secrecy_sum_rate(c, beta, p).ssr;
                  if (ssr > best.ssr) best = Best{true, ssr, i1, i2, iw, total, share, beta, wshare, best.evals};
                }
              }
            }
          }
        }
      }
    }
    return best;
  };

  const int workers = std::min(worker_count(spec), std::max(1, nv));
  std::vector<Best> partial(workers);
  if (workers == 1) {
    partial[0] = search_rows(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back([&, w] { partial[w] = search_rows(w, workers); });
    for (auto& t : pool) t.join();
  }
  // Deterministic reduction: highest SSR, ties to the lowest direction index.
  Best best;
  double evals = 0;
  for (const Best& b : partial) {
    evals += b.evals;
    if (!b.found) continue;
    if (!best.found || b.ssr > best.ssr || (b.ssr == best.ssr && std::tie(b.i1, b.i2) < std::tie(best.i1, best.i2)))
      best = b;
  }

  GridResult out;
  out.evaluations = evals;
  out.best_solution =
      BeamformingSolution::zeros(p, mode == OracleMode::asbd ? SchemeMode::asbd : SchemeMode::osbd);
  if (!best.found) return out;
  BeamformingSolution& s = out.best_solution;
  s.v1 = std::sqrt(best.total * best.share * p.p_s_watts) * vdirs[best.i1];
  s.v2 = std::sqrt(best.total * (1.0 - best.share) * p.p_s_watts) * vdirs[best.i2];
  s.beta = best.beta;
  const double budget = relay_power_budget(ch, s, p);
  if (best.iw >= 0) s.w = std::sqrt(best.wshare * budget) * wdirs[best.iw];
  if (mode == OracleMode::asbd && has_an) s.sigma_an = std::max(0.0, budget - s.w.squaredNorm()) * an_cov_unit;
  out.found_feasible = true;
  out.best_ssr = secrecy_sum_rate(ch, s, p).ssr;
  return out;
}

PowerControlOracle brute_force_power_control(const ChannelSet& ch, const SystemParams& p, double step) {
  p.validate();
  ch.validate(p);
  if (p.n_s != 1 || p.n_1 != 1 || p.n_2 != 1) throw DomainError("power-control oracle needs scalar links");
  if (!(step > 0.0 && step <= 0.5)) throw DomainError("step must be in (0, 0.5]");

  const double hs1 = std::norm(ch.h_s1(0, 0)), hs2 = std::norm(ch.h_s2(0, 0)), h12 = std::norm(ch.h_12(0, 0));
  const double gse = ch.g_se.squaredNorm(), g1e = ch.g_1e.squaredNorm();
  const double ps = p.p_s_watts, s2 = p.sigma2_watts;
  const double c_tau = p.tau / (1.0 - p.tau);
  const double h1 = hs1 / s2;
  const double beta_cap = std::min(1.0, p.beta_max);

  auto evaluate = [&](double beta, double rho1, double& objective) {
    const double pt = beta * ps * hs1 * c_tau;
    LinkPowers lp;
    lp.s1_v1 = rho1 * ps * hs1;
    lp.s1_v2 = (1.0 - rho1) * ps * hs1;
    lp.s2_v1 = rho1 * ps * hs2;
    lp.s2_v2 = (1.0 - rho1) * ps * hs2;
    lp.d2_w = pt * h12;
    lp.eve_v = ps * gse;
    lp.eve_w = pt * g1e;
    lp.v_power = ps;
    lp.w_power = pt;
    if (power_control_worst_violation(lp, beta, p) > 1e-9) return false;
    objective = std::log1p(ps * (1.0 - beta) * h1) - std::log1p((gse * ps + pt * g1e) / (2.0 * s2));
    return true;
  };

  PowerControlOracle out;
  const long n1 = static_cast<long>(std::floor(beta_cap / step + 1e-9));
  for (long i = 0; i <= n1; ++i) {
    const double beta = std::min(beta_cap, i * step);
    const double a = ps * (1.0 - beta) * h1;
    if (!(a > 0.0)) continue;
    const double rho1 = p.gamma_1 / a;
    if (rho1 > 1.0) continue;
    double obj;
    if (evaluate(beta, rho1, obj) && (!out.equality_feasible || obj > out.equality_objective)) {
      out.equality_feasible = true;
      out.equality_objective = obj;
      out.equality_beta = beta;
    }
  }
  const double step2 = std::max(step, 1e-3);
  const long nb = static_cast<long>(std::floor(beta_cap / step2 + 1e-9));
  const long nr = static_cast<long>(std::floor(1.0 / step2 + 1e-9));
  for (long i = 0; i <= nb; ++i) {
    const double beta = std::min(beta_cap, i * step2);
    for (long j = 0; j <= nr; ++j) {
      const double rho1 = std::min(1.0, j * step2);
      double obj;
      if (evaluate(beta, rho1, obj) && (!out.grid2d_feasible || obj > out.grid2d_objective)) {
        out.grid2d_feasible = true;
        out.grid2d_objective = obj;
        out.grid2d_beta = beta;
        out.grid2d_rho1 = rho1;
      }
    }
  }
  if (out.equality_feasible) {
    out.found_feasible = true;
    out.best_objective = out.equality_objective;
    out.beta = out.equality_beta;
    out.rho1 = p.gamma_1 / (ps * (1.0 - out.beta) * h1);
  }
  if (out.grid2d_feasible && (!out.found_feasible || out.grid2d_objective > out.best_objective)) {
    out.found_feasible = true;
    out.best_objective = out.grid2d_objective;
    out.beta = out.grid2d_beta;
    out.rho1 = out.grid2d_rho1;
  }
  return out;
}

}  // namespace securebf
