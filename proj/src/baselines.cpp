#include "securebf/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace securebf {

CVec secrecy_direction(const CMat& h, double a, const CMat& g, double e) {
  const int n = static_cast<int>(h.cols());
  const CMat num = CMat::Identity(n, n) + a * (h.adjoint() * h);
  const CMat den = CMat::Identity(n, n) + e * (g.adjoint() * g);
  Eigen::GeneralizedSelfAdjointEigenSolver<CMat> es(num, den);
  CVec v = es.eigenvectors().col(n - 1);
  return v / v.norm();
}

namespace {

/// Principal right singular vector of h.
CVec mrt_direction(const CMat& h) {
  Eigen::JacobiSVD<CMat> svd(h, Eigen::ComputeFullV);
  return svd.matrixV().col(0);
}

/// Unit blends from `from` to `to` in `steps` equal increments.
std::vector<CVec> blends(const CVec& from, CVec to, int steps) {
  const cplx overlap = from.dot(to);
  if (std::abs(overlap) > 0.0) to *= std::conj(overlap) / std::abs(overlap);
  std::vector<CVec> out;
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    CVec v = (1.0 - t) * from + t * to;
    const double nv = v.norm();
    if (nv > 1e-12) out.push_back(v / nv);
  }
  return out;
}

double gain(const CMat& m, const CVec& v) { return (m * v).squaredNorm(); }

}  // namespace

OmaResult baseline_oma(const ChannelSet& ch, const SystemParams& p, bool with_an, bool with_eh) {
  const auto t0 = std::chrono::steady_clock::now();
  p.validate();
  ch.validate(p);
  if (with_an && !with_eh) throw DomainError("oma: AN needs the harvested relay budget");
  OmaResult res;
  res.with_an = with_an;
  res.with_eh = with_eh;
  res.solution = BeamformingSolution::zeros(p, SchemeMode::baseline_oma);

  const double ps = p.p_s_watts, s2 = p.sigma2_watts;
  const double eve_scale = ps / (2.0 * p.n_e * s2);
  const int kBlend = 10;
  const auto v1s = blends(secrecy_direction(ch.h_s1, ps / s2, ch.g_se, eve_scale), mrt_direction(ch.h_s1), kBlend);
  const auto v2s = blends(secrecy_direction(ch.h_s2, ps / s2, ch.g_se, eve_scale), mrt_direction(ch.h_s2), kBlend);

  CVec wdir = CVec::Zero(p.n_1);
  CMat an_unit = CMat::Zero(p.n_1, p.n_1);
  if (with_eh) {
    if (with_an) {
      wdir = mrt_direction(ch.h_12);
      const CMat proj = null_space_projector(ch.h_12);
      const double dim = proj.trace().real();
      if (dim > 0.5) an_unit = proj / dim;
    } else {
      wdir = secrecy_direction(ch.h_12, 1.0, ch.g_1e, 1.0 / (2.0 * p.n_e));
    }
  }
  const double w_d2 = gain(ch.h_12, wdir), w_e = gain(ch.g_1e, wdir);
  const double an_d2 = std::max(0.0, (ch.h_12 * an_unit * ch.h_12.adjoint()).trace().real());
  const double an_e = std::max(0.0, (ch.g_1e * an_unit * ch.g_1e.adjoint()).trace().real());

  std::vector<double> betas{0.0};
  std::vector<double> shares{0.0};
  if (with_eh) {
    const double cap = std::min(1.0, p.beta_max);
    for (int i = 1; i <= 20; ++i) betas.push_back(cap * i / 20.0);
    for (int i = 1; i <= 10; ++i) shares.push_back(i / 10.0);
  }

  struct Pick {
    int i1 = -1, i2 = -1;
    double beta = 0.0, share = 0.0, ssr = -1.0;
  } best;
  for (std::size_t i1 = 0; i1 < v1s.size(); ++i1) {
    const double s1_v1 = ps * gain(ch.h_s1, v1s[i1]), eve_v1 = ps * gain(ch.g_se, v1s[i1]);
    for (std::size_t i2 = 0; i2 < v2s.size(); ++i2) {
      LinkPowers lp;
      lp.s1_v1 = s1_v1;
      lp.s1_v2 = ps * gain(ch.h_s1, v2s[i2]);
      lp.s2_v2 = ps * gain(ch.h_s2, v2s[i2]);
      lp.eve_v2 = ps * gain(ch.g_se, v2s[i2]);
      lp.eve_v = eve_v1 + lp.eve_v2;
      lp.v2_power = ps;
      lp.v_power = 2.0 * ps;
      for (double beta : betas) {
        const double budget = 0.5 * beta * s1_v1 * p.tau / (1.0 - p.tau);
        for (double share : shares) {
          LinkPowers c = lp;
          const double pw = share * budget, pa = with_an ? (1.0 - share) * budget : 0.0;
          c.d2_w = pw * w_d2;
          c.eve_w = pw * w_e;
          c.w_power = pw;
          c.d2_an = pa * an_d2;
          c.eve_an = pa * an_e;
          c.an_power = pa;
          if (oma_worst_violation(c, beta, p, with_eh) > 1e-9) continue;
          const double ssr = oma_secrecy_sum_rate(c, beta, p, with_eh).ssr;
          if (ssr > best.ssr) best = Pick{static_cast<int>(i1), static_cast<int>(i2), beta, share, ssr};
        }
      }
    }
  }

  res.iterations = 1;
  res.converged = true;
  if (best.i1 < 0) {
    res.status = conic::Status::infeasible;
    res.message = "no feasible time-division point";
  } else {
    BeamformingSolution& s = res.solution;
    s.v1 = std::sqrt(ps) * v1s[best.i1];
    s.v2 = std::sqrt(ps) * v2s[best.i2];
    s.beta = with_eh ? best.beta : 0.0;
    const double budget = 0.5 * s.beta * gain(ch.h_s1, s.v1) * p.tau / (1.0 - p.tau);
    s.w = std::sqrt(best.share * budget) * wdir;
    s.sigma_an = (with_an ? (1.0 - best.share) * budget : 0.0) * an_unit;
    res.status = conic::Status::optimal;
    res.feasible = check_oma_constraints(ch, s, p, with_eh).worst() <= 1e-9;
    res.ssr = oma_secrecy_sum_rate(ch, s, p, with_eh).ssr;
  }
  res.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace securebf
