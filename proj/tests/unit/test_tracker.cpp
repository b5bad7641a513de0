#include <gtest/gtest.h>

#include "mctrack/tracker.hpp"
#include "oracles.hpp"
#include "cost_fixtures.hpp"

using namespace mctrack;

namespace {

DetectedObject object_at(double row, double col, std::array<int, 3> peaks = {100, 120, 140},
                         int h = 10, int w = 10) {
  DetectedObject o;
  o.row = row;
  o.col = col;
  o.height = h;
  o.width = w;
  o.peaks = peaks;
  return o;
}

double asymmetry(const Eigen::Matrix4d& p) { return (p - p.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Kalman, InitialState) {
  const KalmanState k = kalman_init(50, 60);
  EXPECT_EQ(k.state, Eigen::Vector4d(50, 60, 0, 0));
  EXPECT_EQ(k.covariance, Eigen::Matrix4d::Identity() * 100.0);
}

TEST(Kalman, PredictMovesByVelocity) {
  KalmanState k;
  k.state << 10, 20, 2, -1;
  kalman_predict(k);
  EXPECT_DOUBLE_EQ(k.row(), 12);
  EXPECT_DOUBLE_EQ(k.col(), 19);
  KalmanState still = kalman_init(3, 4);
  kalman_predict(still);
  EXPECT_DOUBLE_EQ(still.row(), 3);
  EXPECT_DOUBLE_EQ(still.col(), 4);
}

TEST(Kalman, PredictedCovarianceFromInit) {
  KalmanState k = kalman_init(0, 0);
  kalman_predict(k);
  // Position variance picks up the velocity variance under position += velocity.
  EXPECT_NEAR(k.covariance(0, 0), 200.01, 1e-12);
  EXPECT_NEAR(k.covariance(1, 1), 200.01, 1e-12);
  EXPECT_NEAR(k.covariance(2, 2), 100.01, 1e-12);
  EXPECT_NEAR(k.covariance(3, 3), 100.01, 1e-12);
  EXPECT_NEAR(k.covariance(0, 2), 100.0, 1e-12);
}

TEST(Kalman, FirstUpdateGain) {
  KalmanState k = kalman_init(0, 0);
  kalman_predict(k);
  kalman_update(k, 10, 0);
  EXPECT_NEAR(k.row(), 10 * 200.01 / 201.01, 1e-12);
  EXPECT_NEAR(k.state(2), 10 * 100.0 / 201.01, 1e-12);
}

TEST(Kalman, UpdateWithoutPredictGain) {
  KalmanState k = kalman_init(0, 0);
  k.covariance(0, 0) = 100.01;
  kalman_update(k, 1, 0);
  EXPECT_NEAR(k.row(), 100.01 / 101.01, 1e-12);
}

TEST(Kalman, ZeroInnovationShrinksPositionVariance) {
  KalmanState k = kalman_init(5, 5);
  kalman_predict(k);
  const Eigen::Matrix4d before = k.covariance;
  kalman_update(k, 5, 5);
  EXPECT_EQ(k.state, Eigen::Vector4d(5, 5, 0, 0));
  EXPECT_LT(k.covariance(0, 0), before(0, 0));
  EXPECT_LT(k.covariance(1, 1), before(1, 1));
}

TEST(Kalman, MatchesPerAxisOracle) {
  oracle::Rng rng(7);
  for (int run = 0; run < 20; ++run) {
    KalmanState k = kalman_init(rng.uniform(0, 200), rng.uniform(0, 200));
    oracle::AxisFilter r{k.row()}, c{k.col()};
    for (int step = 0; step < 10; ++step) {
      kalman_predict(k);
      r.predict();
      c.predict();
      const double zr = rng.uniform(0, 200), zc = rng.uniform(0, 200);
      kalman_update(k, zr, zc);
      r.update(zr);
      c.update(zc);
      EXPECT_NEAR(k.row(), r.p, 1e-9);
      EXPECT_NEAR(k.col(), c.p, 1e-9);
      EXPECT_NEAR(k.state(2), r.v, 1e-9);
      EXPECT_NEAR(k.state(3), c.v, 1e-9);
      EXPECT_NEAR(k.covariance(0, 0), r.a, 1e-9);
      EXPECT_NEAR(k.covariance(0, 2), r.b, 1e-9);
      EXPECT_NEAR(k.covariance(2, 2), r.c, 1e-9);
      EXPECT_LE(asymmetry(k.covariance), 1e-9);
      EXPECT_GE(k.covariance.diagonal().minCoeff(), 0.0);
    }
  }
}

TEST(Kalman, ConstantVelocityConverges) {
  KalmanState k = kalman_init(10, 10);
  for (int t = 1; t <= 30; ++t) {
    kalman_predict(k);
    kalman_update(k, 10 + 2.0 * t, 10 - 1.0 * t);
  }
  EXPECT_NEAR(k.row(), 70.0, 0.05);
  EXPECT_NEAR(k.col(), -20.0, 0.05);
  EXPECT_NEAR(k.state(2), 2.0, 0.05);
  EXPECT_NEAR(k.state(3), -1.0, 0.05);
}

TEST(Cost, Examples) {
  EXPECT_DOUBLE_EQ(appearance_cost({10, 20, 30}, {13, 26, 33}), 4.0);
  EXPECT_DOUBLE_EQ(appearance_cost({7, 8, 9}, {7, 8, 9}), 0.0);
}

TEST(Cost, GateUsesPredictedCentroidPerAxis) {
  Track t;
  t.height = 10;
  t.width = 20;
  t.peaks = {1, 2, 3};
  t.kalman = kalman_init(100, 100);
  const std::vector<DetectedObject> dets = {
      object_at(115, 100, {1, 2, 3}), object_at(115.5, 100), object_at(100, 130), object_at(100, 130.5)};
  const CostMatrix c = build_cost_matrix({t}, dets, 1.5, 1e6);
  EXPECT_DOUBLE_EQ(c.at(0, 0), 0.0);
  EXPECT_FALSE(c.feasible(0, 1));
  EXPECT_TRUE(c.feasible(0, 2));
  EXPECT_FALSE(c.feasible(0, 3));
}

TEST(Cost, EntriesArePhiOrBounded) {
  oracle::Rng rng(12);
  std::vector<Track> tracks(5);
  std::vector<DetectedObject> dets;
  for (auto& t : tracks) {
    t.height = t.width = 10;
    t.kalman = kalman_init(rng.uniform(0, 100), rng.uniform(0, 100));
    for (auto& p : t.peaks) p = rng.uniform_int(0, 255);
  }
  for (int i = 0; i < 7; ++i)
    dets.push_back(object_at(rng.uniform(0, 100), rng.uniform(0, 100),
                             {rng.uniform_int(0, 255), rng.uniform_int(0, 255), rng.uniform_int(0, 255)}));
  const CostMatrix c = build_cost_matrix(tracks, dets, 1.5, 1e6);
  for (double v : c.values) EXPECT_TRUE(v == 1e6 || (v >= 0 && v <= 255));
}

TEST(Associate, MixedFeasibilityReplay) {
  const Association a = associate(fixtures::three_by_three_costs());
  ASSERT_EQ(a.assignments.size(), 2u);
  EXPECT_EQ(a.assignments[0], std::make_pair(0, 0));
  EXPECT_EQ(a.assignments[1], std::make_pair(1, 1));
  EXPECT_EQ(a.unassigned_tracks, std::vector<int>{2});
  EXPECT_EQ(a.new_detections, std::vector<int>{2});
  EXPECT_TRUE(a.discarded_detections.empty());
}

TEST(Associate, SingleGatedPair) {
  CostMatrix c(1, 1, 1e6);
  c.at(0, 0) = 3.0;
  const Association a = associate(c);
  ASSERT_EQ(a.assignments.size(), 1u);
  EXPECT_TRUE(a.new_detections.empty());
}

TEST(Associate, LowerRowWinsConflict) {
  CostMatrix c(2, 2, 1e6);
  c.at(0, 0) = 1.0;
  c.at(1, 0) = 0.5;
  c.at(1, 1) = 9.0;
  Association a = associate(c);
  EXPECT_EQ(a.assignments, (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}}));

  CostMatrix d(2, 2, 1e6);
  d.at(0, 0) = 1.0;
  d.at(1, 0) = 0.5;
  a = associate(d);
  EXPECT_EQ(a.assignments, (std::vector<std::pair<int, int>>{{0, 0}}));
  EXPECT_EQ(a.unassigned_tracks, std::vector<int>{1});
}

TEST(Associate, FeasibleLeftoverIsDiscarded) {
  CostMatrix c(1, 2, 1e6);
  c.at(0, 0) = 1.0;
  c.at(0, 1) = 2.0;
  const Association a = associate(c);
  EXPECT_EQ(a.discarded_detections, std::vector<int>{1});
  EXPECT_TRUE(a.new_detections.empty());
}

TEST(Associate, NoDetectionConsumedTwiceProperty) {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = rng.uniform_int(0, 6), l = rng.uniform_int(0, 6);
    CostMatrix c(k, l, 1e6);
    for (auto& v : c.values)
      if (rng.coin(0.5)) v = rng.uniform(0, 255);
    const Association a = associate(c);
    std::vector<int> seen(static_cast<std::size_t>(l), 0);
    for (auto [t, d] : a.assignments) {
      ++seen[static_cast<std::size_t>(d)];
      EXPECT_TRUE(c.feasible(t, d));
    }
    for (int d : a.new_detections) ++seen[static_cast<std::size_t>(d)];
    for (int d : a.discarded_detections) ++seen[static_cast<std::size_t>(d)];
    for (int s : seen) EXPECT_EQ(s, 1);
    EXPECT_EQ(a.assignments.size() + a.unassigned_tracks.size(), static_cast<std::size_t>(k));
  }
}

TEST(Tracker, InitializeAssignsSequentialIds) {
  Tracker t;
  t.initialize_tracks({});
  EXPECT_TRUE(t.tracks().empty());
  t.initialize_tracks({object_at(1, 2), object_at(30, 40)});
  ASSERT_EQ(t.tracks().size(), 2u);
  EXPECT_EQ(t.tracks()[0].id, 1);
  EXPECT_EQ(t.tracks()[1].id, 2);
  EXPECT_EQ(t.tracks()[1].kalman.state(2), 0.0);
  EXPECT_EQ(t.tracks()[1].kalman.state(3), 0.0);
}

TEST(Tracker, OcclusionThenResume) {
  Tracker tr;
  tr.initialize_tracks({object_at(50, 50)});
  for (int f = 1; f <= 3; ++f) tr.step({object_at(50 + 2 * f, 50)});
  for (int f = 4; f <= 6; ++f) tr.step({});
  EXPECT_EQ(tr.tracks()[0].invisible_count, 3);
  const double coast_row = tr.tracks()[0].kalman.row();
  EXPECT_GT(coast_row, 56.0);
  tr.step({object_at(64, 50)});
  ASSERT_EQ(tr.tracks().size(), 1u);
  EXPECT_EQ(tr.tracks()[0].id, 1);
  EXPECT_EQ(tr.tracks()[0].invisible_count, 0);
}

TEST(Tracker, CoastingMovesByVelocity) {
  Tracker tr;
  tr.initialize_tracks({object_at(50, 50)});
  for (int f = 1; f <= 8; ++f) tr.step({object_at(50 + 2 * f, 50 - f)});
  tr.step({});
  const auto s1 = tr.tracks()[0].kalman.state;
  tr.step({});
  const auto s2 = tr.tracks()[0].kalman.state;
  EXPECT_NEAR(s2(0) - s1(0), s1(2), 1e-12);
  EXPECT_NEAR(s2(1) - s1(1), s1(3), 1e-12);
}

TEST(Tracker, DeletedAfterNineUnseenFrames) {
  Tracker tr(TrackerParams{1.5, 1e6, 8, {}});
  tr.initialize_tracks({object_at(50, 50)});
  for (int f = 1; f <= 8; ++f) tr.step({});
  ASSERT_EQ(tr.tracks().size(), 1u);
  EXPECT_EQ(tr.tracks()[0].invisible_count, 8);
  tr.step({});
  EXPECT_TRUE(tr.tracks().empty());
  tr.step({object_at(50, 50)});
  ASSERT_EQ(tr.tracks().size(), 1u);
  EXPECT_EQ(tr.tracks()[0].id, 2);
}

TEST(Tracker, IdStableWhileGatedProperty) {
  oracle::Rng rng(55);
  for (int run = 0; run < 20; ++run) {
    Tracker tr;
    double r = rng.uniform(50, 150), c = rng.uniform(50, 150);
    const double vr = rng.uniform(-3, 3), vc = rng.uniform(-3, 3);
    tr.initialize_tracks({object_at(r, c)});
    for (int f = 0; f < 50; ++f) {
      r += vr + rng.uniform(-0.5, 0.5);
      c += vc + rng.uniform(-0.5, 0.5);
      tr.step({object_at(r, c)});
      ASSERT_EQ(tr.tracks().size(), 1u);
      EXPECT_EQ(tr.tracks()[0].id, 1);
      EXPECT_LE(asymmetry(tr.tracks()[0].kalman.covariance), 1e-9);
    }
  }
}

TEST(Tracker, IdsNeverReused) {
  oracle::Rng rng(66);
  Tracker tr(TrackerParams{1.5, 1e6, 2, {}});
  std::vector<int> seen;
  for (int f = 0; f < 200; ++f) {
    std::vector<DetectedObject> dets;
    for (int k = rng.uniform_int(0, 3); k > 0; --k)
      dets.push_back(object_at(rng.uniform(0, 300), rng.uniform(0, 300)));
    tr.step(dets);
    for (const auto& t : tr.tracks())
      if (std::find(seen.begin(), seen.end(), t.id) == seen.end()) {
        EXPECT_EQ(t.id, static_cast<int>(seen.size()) + 1);
        seen.push_back(t.id);
      }
    for (std::size_t i = 1; i < tr.tracks().size(); ++i)
      EXPECT_LT(tr.tracks()[i - 1].id, tr.tracks()[i].id);
  }
}

TEST(Tracker, BoxCentredOnCentroid) {
  Track t;
  t.height = 20;
  t.width = 10;
  t.kalman = kalman_init(50.5, 30);
  const Box b = t.box();
  EXPECT_EQ(b.w, 10);
  EXPECT_EQ(b.h, 20);
  EXPECT_NEAR(b.x + (b.w - 1) / 2.0, 30, 0.5);
  EXPECT_NEAR(b.y + (b.h - 1) / 2.0, 50.5, 0.5);
}
