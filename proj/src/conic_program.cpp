#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "securebf/conic.hpp"

namespace securebf::conic {

LinExpr LinExpr::var(int index, double coef) {
  LinExpr e;
  e.terms.emplace_back(index, coef);
  return e;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  constant += o.constant;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  for (const auto& [i, v] : o.terms) terms.emplace_back(i, -v);
  constant -= o.constant;
  return *this;
}

LinExpr& LinExpr::operator*=(double k) {
  for (auto& t : terms) t.second *= k;
  constant *= k;
  return *this;
}

double LinExpr::eval(const RVec& x) const {
  double v = constant;
  for (const auto& [i, c] : terms) v += c * x[i];
  return v;
}

LinExpr LinExpr::compacted() const {
  std::map<int, double> acc;
  for (const auto& [i, c] : terms) acc[i] += c;
  LinExpr out(constant);
  for (const auto& [i, c] : acc)
    if (c != 0.0) out.terms.emplace_back(i, c);
  return out;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator-(LinExpr a) { return a *= -1.0; }
LinExpr operator*(double k, LinExpr a) { return a *= k; }
LinExpr operator*(LinExpr a, double k) { return a *= k; }

int HermitianBlock::pair_index(int i, int j) const {
  // Row-major strictly-upper enumeration.
  const int k = i * side - i * (i + 1) / 2 + (j - i - 1);
  return offset + side + 2 * k;
}

double Lmi2::min_eigenvalue(const RVec& x) const {
  const double av = a.eval(x), bv = b.eval(x), cv = c.eval(x);
  const double mid = 0.5 * (av + cv);
  const double rad = std::hypot(0.5 * (av - cv), bv);
  return mid - rad;
}

Lmi2 schur_2x2(LinExpr a, LinExpr b, LinExpr c, std::string label) {
  return Lmi2{a.compacted(), b.compacted(), c.compacted(), std::move(label)};
}

int StandardForm::cone_dim() const {
  int d = nonneg;
  for (int n : psd_sides) d += n * (n + 1) / 2;
  return d;
}

int StandardForm::degree() const {
  int d = nonneg;
  for (int n : psd_sides) d += n;
  return d;
}

int Program::add_scalar(const std::string& name) {
  scalar_names_.push_back(name);
  scalar_index_.push_back(num_params_);
  return num_params_++;
}

const HermitianBlock& Program::add_hermitian(const std::string& name, int side) {
  if (side < 1) throw DomainError("hermitian block side must be >= 1");
  blocks_.push_back(HermitianBlock{name, side, num_params_});
  num_params_ += side * side;
  return blocks_.back();
}

LinExpr Program::trace_product(const HermitianBlock& blk, const CMat& m) {
  if (m.rows() != blk.side || m.cols() != blk.side) throw DomainError("trace_product: dimension mismatch");
  LinExpr e;
  for (int i = 0; i < blk.side; ++i) e.terms.emplace_back(blk.diag_index(i), m(i, i).real());
  for (int i = 0; i < blk.side; ++i)
    for (int j = i + 1; j < blk.side; ++j) {
      // Hermitian part of m at (i,j).
      const cplx mij = 0.5 * (m(i, j) + std::conj(m(j, i)));
      const int k = blk.pair_index(i, j);
      e.terms.emplace_back(k, 2.0 * mij.real());
      e.terms.emplace_back(k + 1, 2.0 * mij.imag());
    }
  return e.compacted();
}

LinExpr Program::trace(const HermitianBlock& blk) {
  LinExpr e;
  for (int i = 0; i < blk.side; ++i) e.terms.emplace_back(blk.diag_index(i), 1.0);
  return e;
}

void Program::add_nonneg(const LinExpr& e, const std::string& label) { nonneg_.emplace_back(e.compacted(), label); }

void Program::add_equality(const LinExpr& e, const std::string& label) {
  equalities_.emplace_back(e.compacted(), label);
}

void Program::add_lmi(Lmi2 lmi) {
  lmi.a = lmi.a.compacted();
  lmi.b = lmi.b.compacted();
  lmi.c = lmi.c.compacted();
  lmis_.push_back(std::move(lmi));
}

namespace {

int svec_index(int row, int col, int side) {
  // row >= col, lower triangle column-major.
  return col * side - col * (col - 1) / 2 + (row - col);
}

}  // namespace

RVec svec(const RMat& m) {
  const int n = static_cast<int>(m.rows());
  RVec v(n * (n + 1) / 2);
  for (int c = 0; c < n; ++c)
    for (int r = c; r < n; ++r) v[svec_index(r, c, n)] = r == c ? m(r, c) : std::sqrt(2.0) * m(r, c);
  return v;
}

RMat smat(const Eigen::Ref<const RVec>& v, int n) {
  RMat m(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = c; r < n; ++r) {
      const double x = v[svec_index(r, c, n)];
      if (r == c) {
        m(r, c) = x;
      } else {
        m(r, c) = x / std::sqrt(2.0);
        m(c, r) = m(r, c);
      }
    }
  return m;
}

StandardForm Program::to_standard_form() const {
  StandardForm sf;
  const int n = num_params_;
  sf.nonneg = num_nonneg();
  for (const auto& blk : blocks_) sf.psd_sides.push_back(2 * blk.side);
  for (std::size_t k = 0; k < lmis_.size(); ++k) sf.psd_sides.push_back(2);
  const int m = sf.cone_dim();
  sf.G = RMat::Zero(m, n);
  sf.h = RVec::Zero(m);
  sf.c = RVec::Zero(n);
  for (const auto& [i, v] : objective_.terms) sf.c[i] -= v;
  sf.objective_offset = objective_.constant;

  int row = 0;
  for (const auto& [e, label] : nonneg_) {
    sf.h[row] = e.constant;
    for (const auto& [i, v] : e.terms) sf.G(row, i) -= v;
    sf.row_labels.push_back(label);
    ++row;
  }
  const double r2 = std::sqrt(2.0);
  for (const auto& blk : blocks_) {
    const int side = 2 * blk.side;
    const int nb = blk.side;
    auto put = [&](int r, int c, int param, double v) {
      // Symmetric entry (r,c) of the embedding gets coefficient v of param.
      const int rr = std::max(r, c), cc = std::min(r, c);
      const double scale = rr == cc ? 1.0 : r2;
      sf.G(row + svec_index(rr, cc, side), param) -= scale * v;
    };
    for (int i = 0; i < nb; ++i) {
      put(i, i, blk.diag_index(i), 1.0);
      put(nb + i, nb + i, blk.diag_index(i), 1.0);
    }
    for (int i = 0; i < nb; ++i)
      for (int j = i + 1; j < nb; ++j) {
        const int re = blk.pair_index(i, j);
        put(j, i, re, 1.0);
        put(nb + j, nb + i, re, 1.0);
        // Lower-left block holds Im X: E(nb+i, j) = Im X(i,j), E(nb+j, i) = -Im X(i,j).
        put(nb + i, j, re + 1, 1.0);
        put(nb + j, i, re + 1, -1.0);
      }
    for (int k = 0; k < side * (side + 1) / 2; ++k) sf.row_labels.push_back(blk.name);
    row += side * (side + 1) / 2;
  }
  for (const auto& lmi : lmis_) {
    const LinExpr* entries[3] = {&lmi.a, &lmi.b, &lmi.c};
    const double scale[3] = {1.0, r2, 1.0};
    for (int k = 0; k < 3; ++k) {
      sf.h[row + k] = scale[k] * entries[k]->constant;
      for (const auto& [i, v] : entries[k]->terms) sf.G(row + k, i) -= scale[k] * v;
      sf.row_labels.push_back(lmi.label);
    }
    row += 3;
  }

  const int p = num_equalities();
  sf.A = RMat::Zero(p, n);
  sf.b = RVec::Zero(p);
  for (int r = 0; r < p; ++r) {
    const auto& e = equalities_[static_cast<std::size_t>(r)].first;
    sf.b[r] = -e.constant;
    for (const auto& [i, v] : e.terms) sf.A(r, i) += v;
  }
  return sf;
}

void Program::dump(std::ostream& os) const {
  const auto sf = to_standard_form();
  os << std::setprecision(17);
  os << "# securebf conic program: minimize c'x s.t. G x + s = h, A x = b, s in K\n";
  os << "n " << sf.c.size() << "\n";
  os << "m " << sf.G.rows() << "\n";
  os << "p " << sf.A.rows() << "\n";
  os << "nonneg " << sf.nonneg << "\n";
  os << "psd";
  for (int s : sf.psd_sides) os << ' ' << s;
  os << "\n";
  os << "offset " << sf.objective_offset << "\n";
  os << "c";
  for (int i = 0; i < sf.c.size(); ++i) os << ' ' << sf.c[i];
  os << "\n";
  for (int r = 0; r < sf.G.rows(); ++r)
    for (int c = 0; c < sf.G.cols(); ++c)
      if (sf.G(r, c) != 0.0) os << "G " << r << ' ' << c << ' ' << sf.G(r, c) << "\n";
  for (int r = 0; r < sf.h.size(); ++r)
    if (sf.h[r] != 0.0) os << "h " << r << ' ' << sf.h[r] << "\n";
  for (int r = 0; r < sf.A.rows(); ++r)
    for (int c = 0; c < sf.A.cols(); ++c)
      if (sf.A(r, c) != 0.0) os << "A " << r << ' ' << c << ' ' << sf.A(r, c) << "\n";
  for (int r = 0; r < sf.b.size(); ++r)
    if (sf.b[r] != 0.0) os << "b " << r << ' ' << sf.b[r] << "\n";
  os << "end\n";
}

CMat Solution::value(const HermitianBlock& blk) const {
  CMat m(blk.side, blk.side);
  for (int i = 0; i < blk.side; ++i) m(i, i) = x[blk.diag_index(i)];
  for (int i = 0; i < blk.side; ++i)
    for (int j = i + 1; j < blk.side; ++j) {
      const int k = blk.pair_index(i, j);
      m(i, j) = cplx(x[k], x[k + 1]);
      m(j, i) = std::conj(m(i, j));
    }
  return m;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::max_iters: return "max-iters";
    case Status::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

}  // namespace securebf::conic
