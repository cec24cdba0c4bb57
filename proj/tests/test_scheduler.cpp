#include "oobsense/scheduler.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace {

using namespace oobsense;

const CandidateView kCurrent{0, true, 2.0, 6.6582};

TEST(SensingInterval, HandEvaluation) {
  EXPECT_NEAR(sensing_interval(kCurrent, {1, true, 3.0, 5.0}, {4.0}), 7.0791, 1e-12);
  EXPECT_NEAR(sensing_interval(kCurrent, {2, true, 4.0, 3.0}, {4.0}), 6.3291, 1e-12);
}

TEST(SensingInterval, ConstraintBoundary) {
  EXPECT_THROW(sensing_interval(kCurrent, {1, true, 2.0, 5.0}, {4.0}), ConstraintViolation);
  EXPECT_THROW(sensing_interval(kCurrent, {1, true, 1.0, 5.0}, {4.0}), ConstraintViolation);
  EXPECT_THROW(sensing_interval(kCurrent, {1, true, 3.0, 5.0}, {0.0}), std::invalid_argument);
}

TEST(SensingInterval, MonotoneInDemandAndOnTime) {
  const CandidateView cand{1, true, 3.0, 5.0};
  double prev = std::numeric_limits<double>::infinity();
  for (double d = 1.0; d < 1e9; d *= 3.0) {
    const double s = sensing_interval(kCurrent, cand, {d});
    EXPECT_LT(s, prev);
    prev = s;
  }
  EXPECT_LT(sensing_interval(kCurrent, cand, {1e12}), 1e-10);
  prev = 0.0;
  for (double t = 2.1; t < 30.0; t += 0.5) {
    const double s = sensing_interval(kCurrent, {1, true, t, 5.0}, {4.0});
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(MaxInterval, FloorWithFloorOfOne) {
  EXPECT_EQ(max_interval_frames(7.0791), 7);
  EXPECT_EQ(max_interval_frames(7.0), 7);
  EXPECT_EQ(max_interval_frames(0.3), 1);
  EXPECT_EQ(max_interval_frames(0.0), 1);
  EXPECT_EQ(max_interval_frames(1e300), std::numeric_limits<int>::max());
}

TEST(SelectReserve, WorkedExample) {
  const std::vector<CandidateView> cands{{1, true, 3.0, 5.0}, {2, true, 4.0, 3.0}, {3, true, 1.0, 10.0}};
  const auto sel = select_reserve(kCurrent, cands, {4.0});
  ASSERT_TRUE(sel);
  EXPECT_EQ(sel->res_c, 1);
  EXPECT_NEAR(sel->s_i_raw, 7.0791, 1e-12);
  EXPECT_EQ(sel->max_i, 7);
}

TEST(SelectReserve, NoneWhenUnavailable) {
  const std::vector<CandidateView> cands{{1, false, 3.0, 5.0}, {2, false, 4.0, 3.0}};
  EXPECT_FALSE(select_reserve(kCurrent, cands, {4.0}));
  EXPECT_FALSE(select_reserve(kCurrent, {}, {4.0}));
}

TEST(SelectReserve, SkipsCurrentChannel) {
  const std::vector<CandidateView> cands{{0, true, 30.0, 5.0}, {2, true, 4.0, 3.0}};
  const auto sel = select_reserve(kCurrent, cands, {4.0});
  ASSERT_TRUE(sel);
  EXPECT_EQ(sel->res_c, 2);
}

TEST(SelectReserve, TieGoesToLowerId) {
  const std::vector<CandidateView> cands{{9, true, 3.0, 5.0}, {4, true, 5.0, 3.0}, {6, true, 3.0, 5.0}};
  const auto sel = select_reserve(kCurrent, cands, {4.0});
  ASSERT_TRUE(sel);
  EXPECT_EQ(sel->res_c, 4);
}

// Exhaustive maximizer: scores every qualifying candidate, keeps the largest
// score, lowest id among equals.
std::optional<ReserveSelection> brute_force(const CandidateView& cur, const std::vector<CandidateView>& cands,
                                            double demand) {
  std::optional<ReserveSelection> best;
  for (const auto& c : cands) {
    if (!c.available || c.id == cur.id || c.t_on <= cur.t_on) continue;
    const double s = (cur.t_on * cur.capacity + c.t_on * c.capacity) / demand;
    const int m = s < 1.0 ? 1 : static_cast<int>(std::floor(s));
    if (!best || s > best->s_i_raw || (s == best->s_i_raw && c.id < best->res_c)) best = ReserveSelection{c.id, s, m};
  }
  return best;
}

TEST(SelectReserve, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t_on(0.1, 10.0), cap(1.0, 10.0), demand(0.5, 50.0);
  std::uniform_int_distribution<int> count(0, 16);
  std::bernoulli_distribution avail(0.7);
  for (int trial = 0; trial < 2000; ++trial) {
    const CandidateView cur{0, true, t_on(rng), cap(rng)};
    std::vector<CandidateView> cands;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) cands.push_back({i + 1, avail(rng), t_on(rng), cap(rng)});
    std::shuffle(cands.begin(), cands.end(), rng);
    const double d = demand(rng);
    const auto got = select_reserve(cur, cands, {d});
    const auto want = brute_force(cur, cands, d);
    ASSERT_EQ(got.has_value(), want.has_value()) << trial;
    if (got) {
      EXPECT_EQ(got->res_c, want->res_c) << trial;
      EXPECT_EQ(got->max_i, want->max_i) << trial;
      EXPECT_GT(std::find_if(cands.begin(), cands.end(), [&](auto& c) { return c.id == got->res_c; })->t_on,
                cur.t_on);
    }
  }
}

SchedulerState with_selection(int count, int max_i, ChannelId res = 5) {
  auto s = start_session(1);
  s.scan_pending = false;
  s.count = count;
  s.selection = ReserveSelection{res, static_cast<double>(max_i) + 0.5, max_i};
  return s;
}

TEST(DecideFrame, Examples) {
  auto step = decide_frame(with_selection(3, 7), false);
  EXPECT_EQ(step.decision.kind, FrameKind::IbOnly);
  EXPECT_EQ(step.state.count, 4);

  step = decide_frame(with_selection(7, 7), true);
  EXPECT_EQ(step.decision.kind, FrameKind::IbPlusFine);
  EXPECT_TRUE(step.state.oob_deferred);

  step = decide_frame(step.state, false);
  EXPECT_EQ(step.decision.kind, FrameKind::IbPlusOob);
  EXPECT_EQ(step.state.count, 1);
  EXPECT_FALSE(step.state.oob_deferred);
}

TEST(DecideFrame, FreshSessionOpensWithScan) {
  const auto s = start_session(3);
  EXPECT_TRUE(s.scan_pending);
  EXPECT_EQ(s.count, 1);
  EXPECT_EQ(s.max_i(), 1);
  EXPECT_EQ(decide_frame(s, false).decision.kind, FrameKind::IbPlusOob);
}

TEST(DecideFrame, NonProactiveNeverScans) {
  auto s = start_session(3, false);
  for (int k = 0; k < 50; ++k) {
    const auto step = decide_frame(s, k % 7 == 0);
    EXPECT_NE(step.decision.kind, FrameKind::IbPlusOob);
    s = step.state;
  }
}

TEST(DecideFrame, WithoutSelectionRescansEveryFrame) {
  auto s = start_session(1);
  s = decide_frame(s, false).state;
  s = apply_scan(s, std::nullopt);
  for (int k = 0; k < 5; ++k) {
    const auto step = decide_frame(s, false);
    EXPECT_EQ(step.decision.kind, FrameKind::IbPlusOob);
    s = step.state;
  }
}

TEST(ApplyFine, Examples) {
  auto fine = apply_fine_result(with_selection(3, 7, 5), FineResult::Vacate);
  EXPECT_EQ(fine.outcome, FineOutcome::Switch);
  EXPECT_EQ(fine.decision, (FrameDecision{FrameKind::SwitchTo, 5}));
  EXPECT_EQ(fine.state.current_channel, 5);
  EXPECT_EQ(fine.state.count, 1);
  EXPECT_TRUE(fine.state.scan_pending);

  fine = apply_fine_result(with_selection(3, 7), FineResult::Stay);
  EXPECT_EQ(fine.outcome, FineOutcome::Continue);
  EXPECT_EQ(fine.state.count, 4);

  auto deferred = decide_frame(with_selection(7, 7), true).state;
  fine = apply_fine_result(deferred, FineResult::Stay);
  EXPECT_EQ(fine.state.count, 7);
  EXPECT_EQ(decide_frame(fine.state, false).decision.kind, FrameKind::IbPlusOob);
}

TEST(ApplyFine, VacateWithoutReserve) {
  auto s = with_selection(7, 7);
  s = decide_frame(s, true).state;
  s.selection.reset();
  const auto fine = apply_fine_result(s, FineResult::Vacate);
  EXPECT_EQ(fine.outcome, FineOutcome::NoReserve);
  EXPECT_EQ(fine.state.count, 1);
  EXPECT_FALSE(fine.state.oob_deferred);
}

// Random fast/fine verdicts driven through the state machine.
TEST(StateMachine, RandomTraceInvariants) {
  std::mt19937_64 rng(31);
  std::bernoulli_distribution fast(0.15), vacate(0.05);
  std::uniform_int_distribution<int> max_i(1, 9);

  for (int run = 0; run < 200; ++run) {
    auto s = start_session(1);
    int ib_since_oob = -1;
    bool clean_since_oob = true;
    for (int k = 0; k < 300; ++k) {
      const bool fine_required = fast(rng);
      const auto step = decide_frame(s, fine_required);
      s = step.state;
      switch (step.decision.kind) {
        case FrameKind::IbPlusOob: {
          if (ib_since_oob >= 0 && clean_since_oob) EXPECT_EQ(ib_since_oob, s.max_i() - 1);
          const int m = max_i(rng);
          s = apply_scan(s, ReserveSelection{2, m + 0.5, m});
          ib_since_oob = 0;
          clean_since_oob = !fine_required;
          EXPECT_EQ(s.count, 1);
          break;
        }
        case FrameKind::IbOnly:
          EXPECT_FALSE(fine_required);
          if (ib_since_oob >= 0) ++ib_since_oob;
          break;
        case FrameKind::IbPlusFine: {
          EXPECT_TRUE(fine_required);
          clean_since_oob = false;
          const auto fine = apply_fine_result(s, vacate(rng) ? FineResult::Vacate : FineResult::Stay);
          s = fine.state;
          if (fine.outcome == FineOutcome::Switch) {
            EXPECT_EQ(s.count, 1);
            EXPECT_TRUE(s.scan_pending);
            ib_since_oob = -1;
          }
          break;
        }
        default:
          FAIL() << "unexpected frame kind";
      }
      EXPECT_GE(s.count, 1);
      EXPECT_LE(s.count, s.max_i());
    }
  }
}

}  // namespace
