#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "securebf/conic.hpp"

namespace securebf::conic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cone {
  int nonneg = 0;
  std::vector<int> sides;
  std::vector<int> offsets;
  int dim = 0;
  int degree = 0;

  explicit Cone(const StandardForm& sf) : nonneg(sf.nonneg), sides(sf.psd_sides) {
    dim = nonneg;
    degree = nonneg;
    for (int n : sides) {
      offsets.push_back(dim);
      dim += n * (n + 1) / 2;
      degree += n;
    }
  }
  int block_dim(std::size_t b) const { return sides[b] * (sides[b] + 1) / 2; }

  RVec identity() const {
    RVec e = RVec::Zero(dim);
    e.head(nonneg).setOnes();
    for (std::size_t b = 0; b < sides.size(); ++b) e.segment(offsets[b], block_dim(b)) = svec(RMat::Identity(sides[b], sides[b]));
    return e;
  }
};

/// Nesterov-Todd scaling point for the current (s, z).
struct Scaling {
  RVec d;       // nonneg: sqrt(s/z)
  RVec lam_nn;  // nonneg: sqrt(s z)
  std::vector<RMat> r, rinv;
  std::vector<RVec> lam;

  void identity(const Cone& k) {
    d = RVec::Ones(k.nonneg);
    lam_nn = RVec::Ones(k.nonneg);
    r.clear();
    rinv.clear();
    lam.clear();
    for (int n : k.sides) {
      r.push_back(RMat::Identity(n, n));
      rinv.push_back(RMat::Identity(n, n));
      lam.push_back(RVec::Ones(n));
    }
  }

  /// Moves the scaling point to the scaled pair (st, zt) = (lam + a ds, lam + a dz)
  /// without refactoring the unscaled iterates, which lose accuracy near the
  /// boundary.
  bool update(const Cone& k, const RVec& st, const RVec& zt) {
    const auto sn = st.head(k.nonneg).array();
    const auto zn = zt.head(k.nonneg).array();
    if ((sn <= 0).any() || (zn <= 0).any()) return false;
    d = (d.array() * (sn / zn).sqrt()).matrix();
    lam_nn = (sn * zn).sqrt().matrix();
    for (std::size_t b = 0; b < k.sides.size(); ++b) {
      const int n = k.sides[b];
      const RMat sm = smat(st.segment(k.offsets[b], k.block_dim(b)), n);
      const RMat zm = smat(zt.segment(k.offsets[b], k.block_dim(b)), n);
      Eigen::LLT<RMat> ls(sm), lz(zm);
      if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
      const RMat lsm = ls.matrixL(), lzm = lz.matrixL();
      Eigen::JacobiSVD<RMat> svd(lzm.transpose() * lsm, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const RVec sv = svd.singularValues();
      if (sv.minCoeff() <= 0.0 || !sv.allFinite()) return false;
      const RVec isq = sv.cwiseSqrt().cwiseInverse();
      r[b] = r[b] * lsm * svd.matrixV() * isq.asDiagonal();
      rinv[b] = sv.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() *
                lsm.triangularView<Eigen::Lower>().solve(rinv[b]);
      lam[b] = sv;
    }
    return true;
  }
};

enum class Op { w, wt, winv, winvt };

RVec apply(const Cone& k, const Scaling& sc, Op op, const RVec& u) {
  RVec out(u.size());
  if (op == Op::w || op == Op::wt)
    out.head(k.nonneg) = sc.d.cwiseProduct(u.head(k.nonneg));
  else
    out.head(k.nonneg) = u.head(k.nonneg).cwiseQuotient(sc.d);
  for (std::size_t b = 0; b < k.sides.size(); ++b) {
    const int n = k.sides[b];
    const RMat um = smat(u.segment(k.offsets[b], k.block_dim(b)), n);
    RMat res;
    switch (op) {
      case Op::w: res = sc.r[b].transpose() * um * sc.r[b]; break;
      case Op::wt: res = sc.r[b] * um * sc.r[b].transpose(); break;
      case Op::winv: res = sc.rinv[b].transpose() * um * sc.rinv[b]; break;
      case Op::winvt: res = sc.rinv[b] * um * sc.rinv[b].transpose(); break;
    }
    out.segment(k.offsets[b], k.block_dim(b)) = svec(res);
  }
  return out;
}

RVec lam_vec(const Cone& k, const Scaling& sc) {
  RVec out(k.dim);
  out.head(k.nonneg) = sc.lam_nn;
  for (std::size_t b = 0; b < k.sides.size(); ++b)
    out.segment(k.offsets[b], k.block_dim(b)) = svec(RMat(sc.lam[b].asDiagonal()));
  return out;
}

RVec jordan(const Cone& k, const RVec& u, const RVec& v) {
  RVec out(k.dim);
  out.head(k.nonneg) = u.head(k.nonneg).cwiseProduct(v.head(k.nonneg));
  for (std::size_t b = 0; b < k.sides.size(); ++b) {
    const int n = k.sides[b];
    const RMat um = smat(u.segment(k.offsets[b], k.block_dim(b)), n);
    const RMat vm = smat(v.segment(k.offsets[b], k.block_dim(b)), n);
    out.segment(k.offsets[b], k.block_dim(b)) = svec(RMat(0.5 * (um * vm + vm * um)));
  }
  return out;
}

/// Solves lam o x = r.
RVec lam_div(const Cone& k, const Scaling& sc, const RVec& r) {
  RVec out(k.dim);
  out.head(k.nonneg) = r.head(k.nonneg).cwiseQuotient(sc.lam_nn);
  for (std::size_t b = 0; b < k.sides.size(); ++b) {
    const int n = k.sides[b];
    RMat rm = smat(r.segment(k.offsets[b], k.block_dim(b)), n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rm(i, j) *= 2.0 / (sc.lam[b][i] + sc.lam[b][j]);
    out.segment(k.offsets[b], k.block_dim(b)) = svec(rm);
  }
  return out;
}

/// Largest alpha with lam + alpha*dir in the cone.
double max_step(const Cone& k, const Scaling& sc, const RVec& dir) {
  double a = kInf;
  for (int i = 0; i < k.nonneg; ++i)
    if (dir[i] < 0) a = std::min(a, -sc.lam_nn[i] / dir[i]);
  for (std::size_t b = 0; b < k.sides.size(); ++b) {
    const int n = k.sides[b];
    const RVec is = sc.lam[b].cwiseSqrt().cwiseInverse();
    const RMat m = is.asDiagonal() * smat(dir.segment(k.offsets[b], k.block_dim(b)), n) * is.asDiagonal();
    Eigen::SelfAdjointEigenSolver<RMat> es(m, Eigen::EigenvaluesOnly);
    const double e = es.eigenvalues()[0];
    if (e < 0) a = std::min(a, -1.0 / e);
  }
  return a;
}

double min_cone_eig(const Cone& k, const RVec& u) {
  double m = kInf;
  for (int i = 0; i < k.nonneg; ++i) m = std::min(m, u[i]);
  for (std::size_t b = 0; b < k.sides.size(); ++b) {
    Eigen::SelfAdjointEigenSolver<RMat> es(smat(u.segment(k.offsets[b], k.block_dim(b)), k.sides[b]),
                                           Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues()[0]);
  }
  return m;
}

/// Reduced KKT system  A'y + G'z = bx,  A x = by,  G x - W'W z = bz.
class Kkt {
 public:
  Kkt(const StandardForm& sf, const Cone& k, const Scaling& sc) : sf_(sf), k_(k), sc_(sc) {
    const int n = static_cast<int>(sf.c.size());
    const int p = static_cast<int>(sf.A.rows());
    gs_.resize(k.dim, n);
    for (int j = 0; j < n; ++j) gs_.col(j) = apply(k, sc, Op::winvt, sf.G.col(j));
    // QR of the scaled G keeps the normal equations' conditioning unsquared.
    RMat aug(k.dim + n, n);
    const double reg = 1e-12 * (1.0 + gs_.cwiseAbs().maxCoeff());
    aug << gs_, reg * RMat::Identity(n, n);
    Eigen::HouseholderQR<RMat> qr(aug);
    r_ = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    if (p > 0) {
      m_ = r_.transpose().triangularView<Eigen::Lower>().solve(sf.A.transpose());
      schur_.compute(m_.transpose() * m_);
    }
  }

  /// Solves  A'y + G'z = bx,  A x = by,  G x - W'W z = bz.
  void solve(const RVec& bx, const RVec& by, const RVec& bz, RVec& x, RVec& y, RVec& z) const {
    // Scaled unknown u = W z turns the last block into Gs x - u = W^{-T} bz.
    const RVec bu = apply(k_, sc_, Op::winvt, bz);
    RVec u;
    reduced_solve(bx, by, bu, x, y, u);
    for (int it = 0; it < 3; ++it) {
      const RVec r1 = bx - sf_.A.transpose() * y - gs_.transpose() * u;
      const RVec r2 = by - sf_.A * x;
      const RVec r3 = bu - gs_ * x + u;
      RVec ex, ey, eu;
      reduced_solve(r1, r2, r3, ex, ey, eu);
      x += ex;
      y += ey;
      u += eu;
    }
    z = apply(k_, sc_, Op::winv, u);
  }

 private:
  RVec h_solve(const RVec& rhs) const {
    const RVec t = r_.transpose().triangularView<Eigen::Lower>().solve(rhs);
    return r_.triangularView<Eigen::Upper>().solve(t);
  }

  void reduced_solve(const RVec& bx, const RVec& by, const RVec& bu, RVec& x, RVec& y, RVec& u) const {
    const RVec r1 = bx + gs_.transpose() * bu;
    if (by.size() > 0) {
      const RVec t = r_.transpose().triangularView<Eigen::Lower>().solve(r1);
      y = schur_.solve(RVec(m_.transpose() * t - by));
      x = h_solve(RVec(r1 - sf_.A.transpose() * y));
    } else {
      y = RVec(0);
      x = h_solve(r1);
    }
    u = gs_ * x - bu;
  }

  const StandardForm& sf_;
  const Cone& k_;
  const Scaling& sc_;
  RMat gs_;
  RMat r_;
  RMat m_;
  Eigen::LDLT<RMat> schur_;
};

struct Equilibration {
  RVec col;     // x = col .* xhat
  RVec row;     // G rows: shat = row .* s
  RVec eq_row;  // A rows
};

Equilibration equilibrate(const StandardForm& sf, const Cone& k, bool enabled, StandardForm& out) {
  const int n = static_cast<int>(sf.c.size());
  const int m = k.dim;
  const int p = static_cast<int>(sf.A.rows());
  Equilibration eq{RVec::Ones(n), RVec::Ones(m), RVec::Ones(p)};
  out = sf;
  if (!enabled) return eq;
  auto inv_sqrt = [](double v) { return v > 0 ? 1.0 / std::sqrt(v) : 1.0; };
  for (int pass = 0; pass < 10; ++pass) {
    RVec rs(m), es(p), cs(n);
    for (int i = 0; i < k.nonneg; ++i) rs[i] = inv_sqrt(out.G.row(i).cwiseAbs().maxCoeff());
    // PSD blocks take a diagonal congruence D S D, which keeps the cone.
    for (std::size_t b = 0; b < k.sides.size(); ++b) {
      const int side = k.sides[b];
      RVec v = RVec::Zero(side);
      int row = k.offsets[b];
      for (int c = 0; c < side; ++c)
        for (int r = c; r < side; ++r, ++row) {
          const double a = out.G.row(row).cwiseAbs().maxCoeff();
          v[r] = std::max(v[r], a);
          v[c] = std::max(v[c], a);
        }
      const RVec d = v.unaryExpr([&](double x) { return std::sqrt(inv_sqrt(x)); });
      row = k.offsets[b];
      for (int c = 0; c < side; ++c)
        for (int r = c; r < side; ++r, ++row) rs[row] = d[r] * d[c];
    }
    for (int i = 0; i < p; ++i) es[i] = inv_sqrt(out.A.row(i).cwiseAbs().maxCoeff());
    out.G = rs.asDiagonal() * out.G;
    out.A = es.asDiagonal() * out.A;
    for (int j = 0; j < n; ++j) {
      double v = m > 0 ? out.G.col(j).cwiseAbs().maxCoeff() : 0.0;
      if (p > 0) v = std::max(v, out.A.col(j).cwiseAbs().maxCoeff());
      cs[j] = inv_sqrt(v);
    }
    out.G = out.G * cs.asDiagonal();
    out.A = out.A * cs.asDiagonal();
    eq.row.array() *= rs.array();
    eq.eq_row.array() *= es.array();
    eq.col.array() *= cs.array();
  }
  out.h = eq.row.cwiseProduct(sf.h);
  out.b = eq.eq_row.cwiseProduct(sf.b);
  out.c = eq.col.cwiseProduct(sf.c);
  return eq;
}

struct Metrics {
  double pres, dres, pcost, dcost, gap, relgap;
  double pinf = kInf, dinf = kInf;
};

Metrics evaluate(const StandardForm& sf, const RVec& x, const RVec& s, const RVec& y, const RVec& z, double tau) {
  const double resx0 = std::max(1.0, sf.c.norm());
  const double resy0 = std::max(1.0, sf.b.norm());
  const double resz0 = std::max(1.0, sf.h.norm());
  Metrics mt{};
  const RVec xb = x / tau, sb = s / tau, yb = y / tau, zb = z / tau;
  // Residuals relative to the magnitude of the terms that produce them.
  const RVec ax = sf.A * xb, gx = sf.G * xb, aty = sf.A.transpose() * yb, gtz = sf.G.transpose() * zb;
  const double py = sf.A.rows() > 0 ? (ax - sf.b).norm() / (1.0 + std::max(sf.b.norm(), ax.norm())) : 0.0;
  const double pz = (gx + sb - sf.h).norm() / (1.0 + std::max({sf.h.norm(), gx.norm(), sb.norm()}));
  mt.pres = std::max(py, pz);
  mt.dres = (aty + gtz + sf.c).norm() / (1.0 + std::max({sf.c.norm(), aty.norm(), gtz.norm()}));
  mt.pcost = sf.c.dot(xb);
  mt.dcost = -sf.h.dot(zb) - sf.b.dot(yb);
  mt.gap = sb.dot(zb);
  mt.relgap = kInf;
  if (mt.pcost < 0)
    mt.relgap = mt.gap / -mt.pcost;
  else if (mt.dcost > 0)
    mt.relgap = mt.gap / mt.dcost;
  const double hz = sf.h.dot(z) + sf.b.dot(y);
  if (hz < 0) mt.pinf = (sf.A.transpose() * y + sf.G.transpose() * z).norm() / resx0 / -hz;
  const double cx = sf.c.dot(x);
  if (cx < 0) {
    const double ax = sf.A.rows() > 0 ? (sf.A * x).norm() / resy0 : 0.0;
    mt.dinf = std::max(ax, (sf.G * x + s).norm() / resz0) / -cx;
  }
  return mt;
}

}  // namespace

Solution solve(const StandardForm& sf0, const SolverSettings& settings) {
  const Cone k(sf0);
  const int n = static_cast<int>(sf0.c.size());
  const int p = static_cast<int>(sf0.A.rows());
  if (sf0.G.rows() != k.dim || sf0.h.size() != k.dim || sf0.G.cols() != n || sf0.A.cols() != n || sf0.b.size() != p)
    throw DomainError("conic::solve: inconsistent standard-form dimensions");

  StandardForm sf;
  const Equilibration eq = equilibrate(sf0, k, settings.equilibrate, sf);

  RVec x = RVec::Zero(n), y = RVec::Zero(p);
  RVec s = k.identity(), z = k.identity();
  double tau = 1.0, kappa = 1.0;
  const RVec e = k.identity();
  const double nu = k.degree;

  Solution sol;
  auto finish = [&](Status st, int iters, bool certificate) {
    sol.status = st;
    sol.iterations = iters;
    const double div = certificate ? 1.0 : tau;
    sol.x = eq.col.cwiseProduct(x) / div;
    sol.s = s.cwiseQuotient(eq.row) / div;
    sol.z = eq.row.cwiseProduct(z) / div;
    sol.y = eq.eq_row.cwiseProduct(y) / div;
    if (certificate) {
      // Normalize the Farkas ray.
      if (st == Status::infeasible) {
        const double hz = -(sf0.h.dot(sol.z) + sf0.b.dot(sol.y));
        if (hz > 0) {
          sol.z /= hz;
          sol.y /= hz;
        }
      } else {
        const double cx = -sf0.c.dot(sol.x);
        if (cx > 0) {
          sol.x /= cx;
          sol.s /= cx;
        }
      }
    }
    const Metrics mt = evaluate(sf0, sol.x, sol.s, sol.y, sol.z, 1.0);
    sol.primal_residual = mt.pres;
    sol.dual_residual = mt.dres;
    sol.gap = mt.gap;
    sol.relative_gap = mt.relgap;
    sol.objective = -sf0.c.dot(sol.x) + sf0.objective_offset;
    return sol;
  };

  struct Snapshot {
    RVec x, s, y, z;
    double tau, kappa;
  };
  Snapshot best{x, s, y, z, tau, kappa};
  double best_merit = kInf;
  int stall = 0;
  auto restore_best = [&]() {
    x = best.x;
    s = best.s;
    y = best.y;
    z = best.z;
    tau = best.tau;
    kappa = best.kappa;
  };
  auto meets_tol = [&](const Metrics& mt) {
    return mt.pres <= settings.tol && mt.dres <= settings.tol && (mt.gap <= settings.tol || mt.relgap <= settings.tol);
  };
  // Falls back to the best iterate seen when progress breaks down.
  auto give_up = [&](int iter) {
    restore_best();
    const Metrics mt = evaluate(sf0, eq.col.cwiseProduct(x), s.cwiseQuotient(eq.row), eq.eq_row.cwiseProduct(y),
                                eq.row.cwiseProduct(z), tau);
    return finish(meets_tol(mt) ? Status::optimal : Status::numerical_failure, iter, false);
  };

  Scaling sc;
  sc.identity(k);
  for (int iter = 0; iter <= settings.max_iters; ++iter) {
    // Convergence tests in original units.
    {
      const RVec xo = eq.col.cwiseProduct(x);
      const RVec so = s.cwiseQuotient(eq.row);
      const RVec zo = eq.row.cwiseProduct(z);
      const RVec yo = eq.eq_row.cwiseProduct(y);
      const Metrics mt = evaluate(sf0, xo, so, yo, zo, tau);
      if (!std::isfinite(mt.pres) || !std::isfinite(mt.dres)) return give_up(iter);
      if (meets_tol(mt)) return finish(Status::optimal, iter, false);
      if (mt.pinf <= settings.tol) return finish(Status::infeasible, iter, true);
      if (mt.dinf <= settings.tol) return finish(Status::unbounded, iter, true);
      const double merit = std::max({mt.pres, mt.dres, std::min(mt.gap, mt.relgap)});
      if (merit < best_merit) {
        best_merit = merit;
        best = Snapshot{x, s, y, z, tau, kappa};
        stall = 0;
      } else if (best_merit <= 1e-3 && ++stall >= 8) {
        return give_up(iter);
      }
    }
    if (iter == settings.max_iters) break;

    const RVec lam = lam_vec(k, sc);
    const RVec lam2 = jordan(k, lam, lam);
    const double mu = (s.dot(z) + tau * kappa) / (nu + 1.0);

    const RVec rx = sf.A.transpose() * y + sf.G.transpose() * z + sf.c * tau;
    const RVec ry = sf.b * tau - sf.A * x;
    const RVec rz = s + sf.G * x - sf.h * tau;
    const double rt = kappa + sf.c.dot(x) + sf.b.dot(y) + sf.h.dot(z);

    const Kkt kkt(sf, k, sc);
    RVec vx, vy, vz;
    kkt.solve(-sf.c, sf.b, sf.h, vx, vy, vz);
    const double vden_base = sf.c.dot(vx) + sf.b.dot(vy) + sf.h.dot(vz);

    struct Dir {
      RVec dx, dy, dz, ds_t, dz_t;
      double dtau, dkappa;
    };
    auto direction = [&](double eta, const RVec& rs, double rk) {
      Dir d;
      const RVec ls = lam_div(k, sc, rs);
      RVec ux, uy, uz;
      kkt.solve(-eta * rx, eta * ry, RVec(-eta * rz - apply(k, sc, Op::wt, ls)), ux, uy, uz);
      const double num = -eta * rt - rk / tau - sf.c.dot(ux) - sf.b.dot(uy) - sf.h.dot(uz);
      const double den = -kappa / tau + vden_base;
      d.dtau = num / den;
      d.dx = ux + d.dtau * vx;
      d.dy = uy + d.dtau * vy;
      d.dz = uz + d.dtau * vz;
      d.dz_t = apply(k, sc, Op::w, d.dz);
      d.ds_t = ls - d.dz_t;
      d.dkappa = (rk - kappa * d.dtau) / tau;
      return d;
    };
    auto step_len = [&](const Dir& d) {
      double a = std::min(max_step(k, sc, d.ds_t), max_step(k, sc, d.dz_t));
      if (d.dtau < 0) a = std::min(a, -tau / d.dtau);
      if (d.dkappa < 0) a = std::min(a, -kappa / d.dkappa);
      return a;
    };

    const Dir aff = direction(1.0, -lam2, -tau * kappa);
    const double a_aff = std::min(1.0, step_len(aff));
    const double sigma = std::pow(1.0 - a_aff, 3);
    const RVec rs = sigma * mu * e - lam2 - jordan(k, aff.ds_t, aff.dz_t);
    const double rk = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;
    const Dir cor = direction(1.0 - sigma, rs, rk);
    const double alpha = std::min(1.0, 0.99 * step_len(cor));
    if (!std::isfinite(alpha) || !cor.dx.allFinite() || alpha < 1e-12) return give_up(iter);

    x += alpha * cor.dx;
    y += alpha * cor.dy;
    if (!sc.update(k, RVec(lam + alpha * cor.ds_t), RVec(lam + alpha * cor.dz_t))) return give_up(iter);
    {
      const RVec lam_new = lam_vec(k, sc);
      s = apply(k, sc, Op::wt, lam_new);
      z = apply(k, sc, Op::winv, lam_new);
    }
    tau += alpha * cor.dtau;
    kappa += alpha * cor.dkappa;
  }
  return finish(Status::max_iters, settings.max_iters, false);
}

Solution solve(const Program& prog, const SolverSettings& settings) { return solve(prog.to_standard_form(), settings); }

Certificate audit(const StandardForm& sf, const Solution& sol) {
  const Cone k(sf);
  const Metrics mt = evaluate(sf, sol.x, sol.s, sol.y, sol.z, 1.0);
  Certificate c;
  c.primal_residual = mt.pres;
  c.dual_residual = mt.dres;
  c.gap = mt.gap;
  c.relative_gap = mt.relgap;
  c.min_slack_eig = min_cone_eig(k, sol.s);
  c.min_dual_eig = min_cone_eig(k, sol.z);
  return c;
}

}  // namespace securebf::conic
