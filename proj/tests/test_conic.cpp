#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "securebf/conic.hpp"
#include "securebf/rng.hpp"

using namespace securebf;
using namespace securebf::conic;

namespace {

CMat random_hermitian(CounterRng& rng, int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
  return 0.5 * (m + m.adjoint());
}

CMat random_psd(CounterRng& rng, int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
  return m * m.adjoint();
}

RVec params_of(const HermitianBlock& blk, const CMat& x, int total) {
  RVec p = RVec::Zero(total);
  for (int i = 0; i < blk.side; ++i) p[blk.diag_index(i)] = x(i, i).real();
  for (int i = 0; i < blk.side; ++i)
    for (int j = i + 1; j < blk.side; ++j) {
      p[blk.pair_index(i, j)] = x(i, j).real();
      p[blk.pair_index(i, j) + 1] = x(i, j).imag();
    }
  return p;
}

}  // namespace

TEST(Svec, RoundTripAndInnerProduct) {
  CounterRng rng(11, 0);
  for (int n = 1; n <= 5; ++n) {
    RMat a(n, n), b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a(i, j) = rng.normal();
        b(i, j) = rng.normal();
      }
    a = (a + a.transpose()).eval();
    b = (b + b.transpose()).eval();
    EXPECT_LT((smat(svec(a), n) - a).norm(), 1e-14);
    EXPECT_NEAR(svec(a).dot(svec(b)), (a * b).trace(), 1e-12);
  }
}

TEST(Program, TraceProductMatchesDirectTrace) {
  CounterRng rng(5, 0);
  Program prog;
  prog.add_scalar("t");
  const HermitianBlock blk = prog.add_hermitian("X", 4);
  const CMat x = random_hermitian(rng, 4);
  const CMat m = random_hermitian(rng, 4);
  const RVec p = params_of(blk, x, prog.num_params());
  EXPECT_NEAR(Program::trace_product(blk, m).eval(p), (m * x).trace().real(), 1e-12);
  EXPECT_NEAR(Program::trace(blk).eval(p), x.trace().real(), 1e-12);
}

TEST(Program, HermitianEmbeddingHasDoubledSpectrum) {
  CounterRng rng(6, 0);
  Program prog;
  const HermitianBlock blk = prog.add_hermitian("X", 3);
  const CMat x = random_hermitian(rng, 3);
  const StandardForm sf = prog.to_standard_form();
  ASSERT_EQ(sf.psd_sides.size(), 1u);
  ASSERT_EQ(sf.psd_sides[0], 6);
  const RVec slack = sf.h - sf.G * params_of(blk, x, prog.num_params());
  const RMat e = smat(slack, 6);
  const RVec ev = Eigen::SelfAdjointEigenSolver<RMat>(e).eigenvalues();
  const RVec xv = Eigen::SelfAdjointEigenSolver<CMat>(x).eigenvalues();
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(ev[2 * i], xv[i], 1e-12);
    EXPECT_NEAR(ev[2 * i + 1], xv[i], 1e-12);
  }
  const RMat xr = x.real(), xi = x.imag();
  EXPECT_LT((e.topLeftCorner(3, 3) - xr).norm(), 1e-12);
  EXPECT_LT((e.bottomLeftCorner(3, 3) - xi).norm(), 1e-12);
}

TEST(Lmi2, MinEigenvalueOfSchurBlock) {
  RVec x(0);
  EXPECT_NEAR(schur_2x2(1.0, 1.0, 1.0).min_eigenvalue(x), 0.0, 1e-15);
  EXPECT_TRUE(schur_2x2(1.0, 1.0, 1.0).satisfied_at(x, 1e-12));
  EXPECT_FALSE(schur_2x2(1.0, 2.0, 1.0).satisfied_at(x, 1e-12));
  EXPECT_NEAR(schur_2x2(1.0, 2.0, 1.0).min_eigenvalue(x), -1.0, 1e-15);
}

TEST(Solver, BoundedLinearProgram) {
  Program prog;
  const int x = prog.add_scalar("x");
  prog.add_nonneg(3.0 - prog.scalar(x), "ub");
  prog.add_nonneg(prog.scalar(x), "lb");
  prog.maximize(prog.scalar(x));
  const Solution sol = solve(prog);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.objective, 3.0, 1e-7);
}

TEST(Solver, EqualityConstrainedLinearProgram) {
  Program prog;
  const int a = prog.add_scalar("a"), b = prog.add_scalar("b");
  prog.add_equality(prog.scalar(a) + 2.0 * prog.scalar(b) - 4.0, "sum");
  prog.add_nonneg(prog.scalar(a), "a");
  prog.add_nonneg(prog.scalar(b), "b");
  prog.maximize(prog.scalar(a) + prog.scalar(b));
  const Solution sol = solve(prog);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.objective, 4.0, 1e-7);
  EXPECT_NEAR(sol.value(prog.scalar(b)), 0.0, 1e-6);
}

TEST(Solver, IdentityLowerBound) {
  // maximize -Tr(Y) - 2 with X = Y + I, Y >= 0.
  Program prog;
  const HermitianBlock y = prog.add_hermitian("Y", 2);
  prog.maximize(-1.0 * Program::trace(y) - 2.0);
  const Solution sol = solve(prog);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.objective, -2.0, 1e-7);
}

TEST(Solver, Lmi2Bound) {
  Program prog;
  const int b = prog.add_scalar("b");
  prog.add_lmi(schur_2x2(1.0, prog.scalar(b), 4.0, "lmi"));
  prog.maximize(prog.scalar(b));
  const Solution sol = solve(prog);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.objective, 2.0, 1e-7);
}

TEST(Solver, DetectsInfeasibility) {
  Program prog;
  const int x = prog.add_scalar("x");
  prog.add_nonneg(prog.scalar(x) - 1.0, "lb");
  prog.add_nonneg(0.5 - prog.scalar(x), "ub");
  prog.maximize(prog.scalar(x));
  const StandardForm sf = prog.to_standard_form();
  const Solution sol = solve(sf);
  ASSERT_EQ(sol.status, Status::infeasible);
  EXPECT_NEAR(sf.h.dot(sol.z), -1.0, 1e-9);
  EXPECT_LT((sf.G.transpose() * sol.z).norm(), 1e-7);
  EXPECT_GE(sol.z.minCoeff(), -1e-12);
}

TEST(Solver, DetectsUnboundedness) {
  Program prog;
  const int x = prog.add_scalar("x");
  prog.add_nonneg(prog.scalar(x), "lb");
  prog.maximize(prog.scalar(x));
  EXPECT_EQ(solve(prog).status, Status::unbounded);
}

// min Tr(C X) s.t. Tr X = 1, X >= 0 has value lambda_min(C).
TEST(Solver, ComplexMinEigenvalueAgainstEigensolver) {
  CounterRng rng(2024, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const CMat c = random_hermitian(rng, n);
    Program prog;
    const HermitianBlock x = prog.add_hermitian("X", n);
    prog.add_equality(Program::trace(x) - 1.0, "unit-trace");
    prog.maximize(-1.0 * Program::trace_product(x, c));
    const StandardForm sf = prog.to_standard_form();
    const Solution sol = solve(sf);
    ASSERT_EQ(sol.status, Status::optimal) << "trial " << trial;
    const double oracle = Eigen::SelfAdjointEigenSolver<CMat>(c).eigenvalues()[0];
    EXPECT_NEAR(-sol.objective, oracle, 1e-6) << "trial " << trial;
    const Certificate cert = audit(sf, sol);
    EXPECT_LT(cert.primal_residual, 1e-7);
    EXPECT_LT(cert.dual_residual, 1e-7);
    EXPECT_GT(cert.min_slack_eig, -1e-9);
    EXPECT_GT(cert.min_dual_eig, -1e-9);
  }
}

TEST(Solver, TwoVariableLinearProgramAgainstVertexEnumeration) {
  CounterRng rng(77, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 5;
    RMat a(m, 2);
    RVec rhs(m);
    for (int i = 0; i < m; ++i) {
      a(i, 0) = rng.normal();
      a(i, 1) = rng.normal();
      rhs[i] = 1.0 + rng.uniform();
    }
    const double c0 = rng.normal(), c1 = rng.normal();
    Program prog;
    const int x0 = prog.add_scalar("x0"), x1 = prog.add_scalar("x1");
    for (int i = 0; i < m; ++i)
      prog.add_nonneg(rhs[i] - a(i, 0) * prog.scalar(x0) - a(i, 1) * prog.scalar(x1), "row");
    for (int s : {x0, x1}) {
      prog.add_nonneg(10.0 - prog.scalar(s), "box");
      prog.add_nonneg(10.0 + prog.scalar(s), "box");
    }
    prog.maximize(c0 * prog.scalar(x0) + c1 * prog.scalar(x1));
    const Solution sol = solve(prog);
    ASSERT_EQ(sol.status, Status::optimal);

    // Oracle: every vertex is the intersection of two active constraint lines.
    RMat all(m + 4, 2);
    RVec allr(m + 4);
    all.topRows(m) = a;
    allr.head(m) = rhs;
    all.bottomRows(4) << 1, 0, -1, 0, 0, 1, 0, -1;
    allr.tail(4).setConstant(10.0);
    double best = -1e300;
    for (int i = 0; i < m + 4; ++i)
      for (int j = i + 1; j < m + 4; ++j) {
        Eigen::Matrix2d mm;
        mm << all.row(i), all.row(j);
        if (std::abs(mm.determinant()) < 1e-12) continue;
        const Eigen::Vector2d v = mm.inverse() * Eigen::Vector2d(allr[i], allr[j]);
        if (((all * v - allr).array() > 1e-9).any()) continue;
        best = std::max(best, c0 * v[0] + c1 * v[1]);
      }
    EXPECT_NEAR(sol.objective, best, 1e-6 * std::max(1.0, std::abs(best))) << "trial " << trial;
  }
}

TEST(Solver, DiagonalEmbeddingMatchesScalarProgram) {
  // A diagonal-only objective over a PSD block reduces to an LP over its diagonal.
  CounterRng rng(9, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3;
    RVec w(n);
    for (int i = 0; i < n; ++i) w[i] = rng.normal();
    CMat c = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) c(i, i) = w[i];
    Program prog;
    const HermitianBlock x = prog.add_hermitian("X", n);
    prog.add_nonneg(2.0 - Program::trace(x), "power");
    prog.maximize(Program::trace_product(x, c));
    const Solution sol = solve(prog);
    ASSERT_EQ(sol.status, Status::optimal);
    EXPECT_NEAR(sol.objective, 2.0 * std::max(0.0, w.maxCoeff()), 1e-6);
  }
}

TEST(Program, DumpListsDimensionsAndTerminator) {
  Program prog;
  const int x = prog.add_scalar("x");
  prog.add_nonneg(1.0 - prog.scalar(x), "ub");
  prog.add_lmi(schur_2x2(1.0, prog.scalar(x), 1.0, "lmi"));
  prog.maximize(prog.scalar(x));
  std::ostringstream os;
  prog.dump(os);
  const std::string text = os.str();
  EXPECT_NE(text.find("n 1\n"), std::string::npos);
  EXPECT_NE(text.find("m 4\n"), std::string::npos);
  EXPECT_NE(text.find("psd 2\n"), std::string::npos);
  EXPECT_NE(text.find("end\n"), std::string::npos);
}
