#include <gtest/gtest.h>

#include <algorithm>
#include <nlohmann/json.hpp>

#include "judgements.hpp"
#include "mctrack/evaluation.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace mctrack;

TEST(JudgeFrame, PerfectHit) {
  const auto j = judge_frame(3, {{10, 10, 5, 5}}, {{10, 10, 5, 5}});
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0].outcome, Outcome::TD);
  EXPECT_DOUBLE_EQ(*j[0].centroid_error, 0.0);
}

TEST(JudgeFrame, DisjointIsFdAndMd) {
  const auto j = judge_frame(1, {{0, 0, 5, 5}}, {{20, 20, 5, 5}});
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(std::count_if(j.begin(), j.end(), [](auto& x) { return x.outcome == Outcome::MD; }), 1);
  EXPECT_EQ(std::count_if(j.begin(), j.end(), [](auto& x) { return x.outcome == Outcome::FD; }), 1);
}

TEST(JudgeFrame, EdgeContactIsNotOverlap) {
  const auto j = judge_frame(1, {{5, 0, 5, 5}}, {{0, 0, 5, 5}});
  EXPECT_EQ(j.size(), 2u);
  EXPECT_DOUBLE_EQ(overlap_area({0, 0, 5, 5}, {4, 4, 5, 5}), 1.0);
}

TEST(JudgeFrame, MissingAndEmpty) {
  auto j = judge_frame(1, {}, {{0, 0, 5, 5}});
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0].outcome, Outcome::MD);
  j = judge_frame(1, {}, {});
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0].outcome, Outcome::TN);
}

TEST(JudgeFrame, GreedyByLargestOverlap) {
  // The second detection overlaps the first truth box more; it wins that box,
  // and the first detection is left to the second truth box.
  const std::vector<Box> truth = {{0, 0, 10, 10}, {8, 0, 10, 10}};
  const std::vector<Box> dets = {{6, 0, 10, 10}, {1, 0, 10, 10}};
  const auto j = judge_frame(1, dets, truth);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0].outcome, Outcome::TD);
  EXPECT_EQ(j[1].outcome, Outcome::TD);
  EXPECT_DOUBLE_EQ(*j[0].centroid_error, 1.0);
  EXPECT_DOUBLE_EQ(*j[1].centroid_error, 2.0);
}

TEST(Aggregate, Examples) {
  EvalReport r = aggregate(fixtures::judgement_set(100, 0, 0, 0));
  EXPECT_DOUBLE_EQ(r.td_pct, 100.0);
  EXPECT_DOUBLE_EQ(r.fd_pct, 0.0);
  EXPECT_DOUBLE_EQ(r.md_pct, 0.0);

  r = aggregate(fixtures::judgement_set(83, 0, 17, 0));
  EXPECT_DOUBLE_EQ(r.td_pct, 83.0);
  EXPECT_DOUBLE_EQ(r.md_pct, 17.0);

  r = aggregate(fixtures::judgement_set(90, 10, 0, 0));
  EXPECT_DOUBLE_EQ(r.fd_pct, 10.0);
  EXPECT_DOUBLE_EQ(r.td_pct, 90.0);
}

TEST(Aggregate, ZeroDenominators) {
  const EvalReport r = aggregate(fixtures::judgement_set(0, 0, 0, 5));
  EXPECT_EQ(r.frames, 5);
  EXPECT_DOUBLE_EQ(r.td_pct, 0.0);
  EXPECT_DOUBLE_EQ(r.fd_pct, 0.0);
  EXPECT_DOUBLE_EQ(r.md_pct, 0.0);
  for (const auto& p : r.precision) EXPECT_DOUBLE_EQ(p.fraction, 0.0);
}

TEST(Aggregate, EmptyInputThrows) { EXPECT_THROW(aggregate({}), EmptyEvaluationError); }

TEST(Aggregate, FrameRules) {
  // One frame with two truth boxes, one matched.
  const std::vector<FrameJudgement> j = {{1, Outcome::TD, 0.0}, {1, Outcome::MD, std::nullopt}};
  EXPECT_EQ(aggregate(j, FrameRule::AllMatched).n_md, 1);
  EXPECT_EQ(aggregate(j, FrameRule::AnyMatched).n_td, 1);
}

TEST(Aggregate, FalseDetectionAlongsideHit) {
  const std::vector<FrameJudgement> j = {{1, Outcome::TD, 1.0}, {1, Outcome::FD, std::nullopt}};
  const EvalReport r = aggregate(j);
  EXPECT_EQ(r.n_td, 1);
  EXPECT_EQ(r.n_fd, 1);
  EXPECT_DOUBLE_EQ(r.fd_pct, 50.0);
}

TEST(Aggregate, PrecisionCurveShapeAndSaturation) {
  const EvalReport r = aggregate(fixtures::judgement_set(20, 3, 5, 2, 10));
  ASSERT_EQ(r.precision.size(), 51u);
  EXPECT_EQ(r.precision.front().threshold, 0);
  EXPECT_EQ(r.precision.back().threshold, 50);
  for (std::size_t i = 1; i < r.precision.size(); ++i)
    EXPECT_GE(r.precision[i].fraction, r.precision[i - 1].fraction);
  EXPECT_DOUBLE_EQ(r.precision[0].fraction, 2.0 / 25.0);
  EXPECT_DOUBLE_EQ(r.precision.back().fraction, 20.0 / 25.0);
}

TEST(Aggregate, InvariantUnderReordering) {
  oracle::Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto j = fixtures::judgement_set(rng.uniform_int(0, 30), rng.uniform_int(0, 10),
                                     rng.uniform_int(0, 10), rng.uniform_int(1, 5));
    const EvalReport a = aggregate(j);
    std::shuffle(j.begin(), j.end(), rng.engine());
    const EvalReport b = aggregate(j);
    EXPECT_EQ(a.td_pct, b.td_pct);
    EXPECT_EQ(a.fd_pct, b.fd_pct);
    EXPECT_EQ(a.md_pct, b.md_pct);
    EXPECT_EQ(a.n_td + a.n_md, static_cast<int>(std::count_if(j.begin(), j.end(), [](auto& x) {
                return x.outcome == Outcome::TD || x.outcome == Outcome::MD;
              })));
  }
}

TEST(JudgeSequence, CountsEveryFrameAndSkipsAbsentTruth) {
  std::vector<GroundTruthBox> gt;
  for (int f = 1; f <= 6; ++f) gt.push_back({f, 10, 10, 5, 5, f != 4});
  const std::vector<DetectionRecord> dets = {{2, 1, {10, 10, 5, 5}}, {4, 1, {50, 50, 5, 5}}};
  const EvalReport r = aggregate(judge_sequence(dets, {gt}, 8));
  EXPECT_EQ(r.frames, 8);
  EXPECT_EQ(r.n_td, 1);
  EXPECT_EQ(r.n_md, 4);
  EXPECT_EQ(r.n_fd, 1);
}

TEST(MeasureFps, Examples) {
  EXPECT_DOUBLE_EQ(measure_fps(300, 2.0), 150.0);
  EXPECT_DOUBLE_EQ(measure_fps(0, 0.0), 0.0);
  EXPECT_THROW(measure_fps(10, 0.0), MeasurementError);
}

TEST(Report, JsonAndCsv) {
  testing_support::TempDir dir;
  EvalReport r = aggregate(fixtures::judgement_set(9, 1, 1, 0));
  r.fps = 42.5;
  write_report(dir / "r.json", r);
  write_precision_csv(dir / "p.csv", r);
  const auto j = nlohmann::json::parse(testing_support::slurp(dir / "r.json"));
  EXPECT_EQ(j["n_td"], 9);
  EXPECT_DOUBLE_EQ(j["fd_pct"].get<double>(), 10.0);
  EXPECT_DOUBLE_EQ(j["fps"].get<double>(), 42.5);
  EXPECT_EQ(j["precision"].size(), 51u);
  const std::string csv = testing_support::slurp(dir / "p.csv");
  EXPECT_EQ(csv.rfind("threshold,fraction\n0,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 52);
}
