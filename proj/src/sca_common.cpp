#include "securebf/sca_common.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

namespace securebf {

Normalized Normalized::from(const ChannelSet& ch, const SystemParams& p) {
  Normalized n;
  const double s2 = p.sigma2_watts;
  const CMat g1 = ch.h_s1.adjoint() * ch.h_s1;
  const double lmax = Eigen::SelfAdjointEigenSolver<CMat>(g1, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  n.w_scale = std::max(p.p_s_watts * lmax, 1e-300);
  n.kappa_w = n.w_scale / s2;
  n.c_tau = p.tau / (1.0 - p.tau);
  n.a1 = (p.p_s_watts / s2) * g1;
  n.a2 = (p.p_s_watts / s2) * (ch.h_s2.adjoint() * ch.h_s2);
  n.b12 = (n.w_scale / s2) * (ch.h_12.adjoint() * ch.h_12);
  return n;
}

double RankRatios::worst() const { return std::max({v1, v2, w}); }

RankOne extract_principal(const CMat& normalized) {
  if (normalized.trace().real() <= 1e-6) return RankOne{CVec::Zero(normalized.rows()), 0.0};
  return rank_one_extract(normalized);
}

conic::SolverSettings subproblem_settings() {
  conic::SolverSettings s;
  s.tol = 1e-7;
  return s;
}

}  // namespace securebf
