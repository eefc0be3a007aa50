#include "securebf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace securebf {

RankOne rank_one_extract(const CMat& m) {
  const int n = static_cast<int>(m.rows());
  RankOne out;
  out.vector = CVec::Zero(n);
  if (n == 0) return out;
  const CMat herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm);
  const RVec& ev = es.eigenvalues();
  const double l1 = ev[n - 1];
  if (!(l1 > 0.0)) return out;
  out.ratio = n > 1 ? std::max(0.0, ev[n - 2]) / l1 : 0.0;
  CVec u = es.eigenvectors().col(n - 1);
  // Fix the global phase so repeated calls agree bit for bit.
  for (int i = 0; i < n; ++i)
    if (std::abs(u[i]) > 1e-12) {
      u *= std::conj(u[i]) / std::abs(u[i]);
      break;
    }
  out.vector = std::sqrt(l1) * u;
  return out;
}

int numerical_rank(const CMat& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(m);
  const RVec sv = svd.singularValues();
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) * std::numeric_limits<double>::epsilon() *
                     (sv.size() > 0 ? sv[0] : 0.0);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++r;
  return r;
}

CMat null_space_projector(const CMat& h) {
  const int n = static_cast<int>(h.cols());
  if (h.rows() == 0) return CMat::Identity(n, n);
  Eigen::JacobiSVD<CMat> svd(h, Eigen::ComputeFullV);
  const int r = numerical_rank(h);
  const CMat vr = svd.matrixV().leftCols(r);
  return CMat::Identity(n, n) - vr * vr.adjoint();
}

NullBasis eve_null_basis(const CMat& g) {
  const int n = static_cast<int>(g.cols());
  NullBasis out;
  if (g.rows() == 0) {
    out.basis = CMat::Identity(n, n);
    return out;
  }
  Eigen::JacobiSVD<CMat> svd(g, Eigen::ComputeFullV);
  const int r = numerical_rank(g);
  if (r >= n) throw DomainError("eavesdropper channel has an empty null space (requires N1 > Ne)");
  out.basis = svd.matrixV().rightCols(n - r);
  out.rank_deficient = r < std::min<int>(static_cast<int>(g.rows()), n);
  return out;
}

}  // namespace securebf
