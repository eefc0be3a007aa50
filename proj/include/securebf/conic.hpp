#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "securebf/types.hpp"

namespace securebf::conic {

/// Affine function of the program's real scalar parameters.
struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  LinExpr() = default;
  LinExpr(double c) : constant(c) {}  // NOLINT(google-explicit-constructor)
  static LinExpr var(int index, double coef = 1.0);

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(double k);
  double eval(const RVec& x) const;
  /// Merges duplicate indices and drops exact zeros.
  LinExpr compacted() const;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a);
LinExpr operator*(double k, LinExpr a);
LinExpr operator*(LinExpr a, double k);

/// Hermitian PSD matrix variable. Stores side*side real parameters: the
/// diagonal, then (re, im) of each strictly-upper entry in row-major order.
struct HermitianBlock {
  std::string name;
  int side = 0;
  int offset = 0;

  int num_params() const { return side * side; }
  int diag_index(int i) const { return offset + i; }
  /// Index of Re X(i,j) for i < j; Im X(i,j) is the next index.
  int pair_index(int i, int j) const;
};

/// [[a, b], [b, c]] >= 0, i.e. a >= 0, c >= 0, a*c >= b^2.
struct Lmi2 {
  LinExpr a;
  LinExpr b;
  LinExpr c;
  std::string label;

  double min_eigenvalue(const RVec& x) const;
  bool satisfied_at(const RVec& x, double tol = 0.0) const { return min_eigenvalue(x) >= -tol; }
};

Lmi2 schur_2x2(LinExpr a, LinExpr b, LinExpr c, std::string label = {});

/// Standard form: minimize c'x  s.t.  G x + s = h,  A x = b,  s in K, where
/// K = R^l_+ x S^{n_1}_+ x ... with PSD blocks stored as svec (lower
/// triangle, column-major, off-diagonals scaled by sqrt(2)).
struct StandardForm {
  RVec c;
  RMat G;
  RVec h;
  RMat A;
  RVec b;
  int nonneg = 0;
  std::vector<int> psd_sides;
  double objective_offset = 0.0;  ///< program objective = -(c'x) + offset
  std::vector<std::string> row_labels;

  int cone_dim() const;
  int degree() const;
};

/// Linear conic program over Hermitian PSD blocks, free scalars, nonnegative
/// rows, equalities and 2x2 LMIs; objective is maximized.
class Program {
 public:
  int add_scalar(const std::string& name);
  LinExpr scalar(int index) const { return LinExpr::var(index); }
  const HermitianBlock& add_hermitian(const std::string& name, int side);

  /// Tr(M X) for Hermitian M (only the Hermitian part of M is used).
  static LinExpr trace_product(const HermitianBlock& blk, const CMat& m);
  static LinExpr trace(const HermitianBlock& blk);

  void add_nonneg(const LinExpr& e, const std::string& label);
  void add_equality(const LinExpr& e, const std::string& label);
  void add_lmi(Lmi2 lmi);
  void maximize(const LinExpr& e) { objective_ = e.compacted(); }

  int num_params() const { return num_params_; }
  int num_scalars() const { return static_cast<int>(scalar_names_.size()); }
  const std::vector<HermitianBlock>& hermitian_blocks() const { return blocks_; }
  int num_nonneg() const { return static_cast<int>(nonneg_.size()); }
  int num_equalities() const { return static_cast<int>(equalities_.size()); }
  int num_lmi2() const { return static_cast<int>(lmis_.size()); }
  const std::vector<std::pair<LinExpr, std::string>>& nonneg_rows() const { return nonneg_; }
  const std::vector<Lmi2>& lmis() const { return lmis_; }
  const LinExpr& objective() const { return objective_; }

  StandardForm to_standard_form() const;

  /// Plain-text dump of the standard form (format in docs/conic_dump.md).
  void dump(std::ostream& os) const;

 private:
  int num_params_ = 0;
  std::vector<std::string> scalar_names_;
  std::vector<int> scalar_index_;
  std::vector<HermitianBlock> blocks_;
  std::vector<std::pair<LinExpr, std::string>> nonneg_;
  std::vector<std::pair<LinExpr, std::string>> equalities_;
  std::vector<Lmi2> lmis_;
  LinExpr objective_;
};

enum class Status { optimal, infeasible, unbounded, max_iters, numerical_failure };
std::string to_string(Status s);

struct SolverSettings {
  double tol = 1e-8;
  int max_iters = 200;
  bool equilibrate = true;
};

struct Solution {
  Status status = Status::numerical_failure;
  RVec x;
  RVec s;
  RVec y;  ///< equality multipliers
  RVec z;  ///< cone multipliers
  double objective = 0.0;  ///< program (maximize) objective at x
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;           ///< s'z
  double relative_gap = 0.0;
  int iterations = 0;

  double value(const LinExpr& e) const { return e.eval(x); }
  CMat value(const HermitianBlock& blk) const;
};

/// Homogeneous self-dual interior-point method with Nesterov-Todd scaling and
/// Mehrotra predictor-corrector. On `infeasible`, (y, z) is a normalized
/// Farkas certificate: A'y + G'z ~ 0, h'z + b'y = -1, z in K.
Solution solve(const StandardForm& sf, const SolverSettings& settings = {});
Solution solve(const Program& prog, const SolverSettings& settings = {});

/// Residuals recomputed from scratch in the original data (for audits).
struct Certificate {
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  double relative_gap = 0.0;
  double min_slack_eig = 0.0;
  double min_dual_eig = 0.0;
};
Certificate audit(const StandardForm& sf, const Solution& sol);

/// Real symmetric <-> svec helpers shared with the solver and tests.
RVec svec(const RMat& m);
RMat smat(const Eigen::Ref<const RVec>& v, int side);

}  // namespace securebf::conic
