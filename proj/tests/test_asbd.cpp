#include <cmath>

#include <gtest/gtest.h>

#include "securebf/asbd.hpp"
#include "securebf/baselines.hpp"

using namespace securebf;

namespace {

ChannelSet channels(const SystemParams& p, std::uint64_t seed) {
  return generate_channel_set(p, NetworkLayout::default_for(p.n_e), seed);
}

}  // namespace

TEST(AsbdSubproblem, ProjectorAnnihilatesRelayLink) {
  SystemParams p;
  const auto ch = channels(p, 1);
  const AsbdProgram ap = build_asbd_subproblem(ch, p, AsbdState{});
  EXPECT_TRUE(ap.with_an);
  EXPECT_LT((ch.h_12 * ap.projector).norm(), 1e-12 * ch.h_12.norm());
  EXPECT_NEAR(ap.trace_p, p.n_1 - p.n_2, 1e-10);
  EXPECT_EQ(ap.program.hermitian_blocks().size(), 3u);
}

TEST(AsbdSubproblem, NoAnWhenRelayLinkHasFullColumnRank) {
  SystemParams p;
  p.n_1 = 2;
  const AsbdProgram ap = build_asbd_subproblem(channels(p, 1), p, AsbdState{});
  EXPECT_FALSE(ap.with_an);
}

TEST(AsbdSubproblem, FeasibilityPhaseAddsOneSlackPerLinearizedRow) {
  SystemParams p;
  AsbdOptions opt;
  opt.feasibility_phase = true;
  const AsbdProgram ap = build_asbd_subproblem(channels(p, 1), p, AsbdState{}, opt);
  EXPECT_EQ(ap.feasibility_slacks.size(), 5u);
}

TEST(Asbd, DefaultInstanceConvergesFeasiblyWithExactZeroForcing) {
  SystemParams p;
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const auto ch = channels(p, seed);
    const AsbdResult r = run_asbd(ch, p);
    ASSERT_TRUE(r.feasible) << r.message;
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 30);
    const CMat& s = r.solution.sigma_an;
    const double tr = s.trace().real();
    EXPECT_LE((ch.h_12 * s * ch.h_12.adjoint()).norm(), 1e-9 * std::max(tr, 1e-300));
    EXPECT_LE(check_asbd_constraints(ch, r.solution, p).worst(), 1e-6);
    EXPECT_NO_THROW(r.solution.validate(p));
    // Tr(Sigma) never decreases across iterations.
    const auto& t = r.state.objective_trace;
    for (std::size_t i = 1; i < t.size(); ++i) EXPECT_GE(t[i], t[i - 1] - 1e-6 * (1.0 + std::abs(t[i - 1])));
  }
}

TEST(Asbd, RankOneOrFlagged) {
  SystemParams p;
  const AsbdResult r = run_asbd(channels(p, 3), p);
  ASSERT_TRUE(r.feasible);
  EXPECT_TRUE(r.ranks.worst() <= 1e-4 || r.solution.randomized);
}

TEST(Asbd, Deterministic) {
  SystemParams p;
  const auto ch = channels(p, 5);
  const AsbdResult a = run_asbd(ch, p), b = run_asbd(ch, p);
  EXPECT_EQ((a.solution.v1 - b.solution.v1).norm(), 0.0);
  EXPECT_EQ(a.solution.beta, b.solution.beta);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Asbd, WithoutAnHasNoNoise) {
  SystemParams p;
  const auto ch = channels(p, 2);
  const AsbdResult r = baseline_without_an(ch, p);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.solution.sigma_an.norm(), 0.0);
  EXPECT_LE(check_asbd_constraints(ch, r.solution, p).worst(), 1e-6);
}

TEST(Asbd, UnreachableQosReportsInfeasible) {
  SystemParams p;
  p.gamma = 1e9;
  const AsbdResult r = run_asbd(channels(p, 0), p);
  EXPECT_FALSE(r.feasible);
  EXPECT_NE(r.status, conic::Status::optimal);
}

TEST(Asbd, TraceSinkSeesEveryIteration) {
  SystemParams p;
  int events = 0;
  const AsbdResult r = run_asbd(channels(p, 1), p, [&](const nlohmann::json& j) {
    if (!j.contains("phase")) ++events;
  });
  EXPECT_EQ(events, r.iterations);
}
