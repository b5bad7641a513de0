#include <gtest/gtest.h>

#include "mctrack/foreground.hpp"
#include "oracles.hpp"

using namespace mctrack;

namespace {

ActingBackground single(double b, double d, int w, int eta = 4) {
  return {eta, GrayImage(1, 1, b), GrayImage(1, 1, d), WeightImage(1, 1, w)};
}

}  // namespace

TEST(LevelBands, ForEtaFour) {
  const LevelBands b = LevelBands::for_eta(4);
  EXPECT_EQ(b.weight_low_max, 1);
  EXPECT_EQ(b.weight_high, 3);
  EXPECT_EQ(b.weight_level(0), Level::Low);
  EXPECT_EQ(b.weight_level(1), Level::Low);
  EXPECT_EQ(b.weight_level(2), Level::Medium);
  EXPECT_EQ(b.weight_level(3), Level::High);
}

TEST(LevelBands, IntensityBoundariesInclusive) {
  const LevelBands b = LevelBands::for_eta(4);
  EXPECT_EQ(b.intensity_level(0), Level::Low);
  EXPECT_EQ(b.intensity_level(85), Level::Low);
  EXPECT_EQ(b.intensity_level(85.0001), Level::Medium);
  EXPECT_EQ(b.intensity_level(169.999), Level::Medium);
  EXPECT_EQ(b.intensity_level(170), Level::High);
  EXPECT_EQ(b.intensity_level(255), Level::High);
}

TEST(LevelBands, PartitionForLargerEta) {
  for (int eta = 2; eta <= 12; ++eta) {
    const LevelBands b = LevelBands::for_eta(eta);
    EXPECT_EQ(b.weight_low_max, (eta - 1) / 3);
    EXPECT_EQ(b.weight_level(eta - 1), Level::High);
    for (int w = 0; w < eta - 1; ++w) EXPECT_NE(b.weight_level(w), Level::High);
  }
}

TEST(DifferenceForeground, Examples) {
  EXPECT_DOUBLE_EQ(difference_foreground(GrayImage(1, 1, 200), single(50, 0, 2))[0], 150.0);
  EXPECT_DOUBLE_EQ(difference_foreground(GrayImage(1, 1, 200), single(50, 0, 3))[0], 0.0);
}

TEST(DifferenceForeground, StaticSceneIsZero) {
  oracle::Rng rng(2);
  const GrayImage f = oracle::textured_frame(8, 8, rng);
  const ActingBackground bg{4, f, GrayImage(8, 8, 0.0), WeightImage(8, 8, 3)};
  for (double v : difference_foreground(f, bg).pixels()) EXPECT_EQ(v, 0.0);
}

TEST(ClassifyPixel, Examples) {
  EXPECT_EQ(classify_pixel(Level::Medium, Level::Low, Level::Medium), 1);
  EXPECT_EQ(classify_pixel(Level::Low, Level::High, Level::High), 0);
  EXPECT_EQ(classify_pixel(Level::Low, Level::Low, Level::Low), 0);
  EXPECT_EQ(classify_pixel(Level::Low, Level::Low, Level::Medium), 1);
  EXPECT_EQ(classify_pixel(Level::Low, Level::Medium, Level::High), 0);
  EXPECT_EQ(classify_pixel(Level::Medium, Level::Medium, Level::Medium), 1);
  EXPECT_EQ(classify_pixel(Level::Medium, Level::High, Level::Medium), 0);
}

TEST(ClassifyPixel, TotalAndHighWeightNeverSet) {
  const Level all[] = {Level::Low, Level::Medium, Level::High};
  for (Level w : all)
    for (Level d : all)
      for (Level f : all) {
        const auto v = classify_pixel(w, d, f);
        EXPECT_TRUE(v == 0 || v == 1);
        if (w == Level::High) EXPECT_EQ(v, 0);
        int expected = 0;
        if (w == Level::Medium) expected = f >= d;
        if (w == Level::Low && d == Level::Low) expected = f > d;
        EXPECT_EQ(v, expected);
      }
}

TEST(ClassifyPixel, MonotoneInDifferenceAtMediumWeight) {
  const Level all[] = {Level::Low, Level::Medium, Level::High};
  for (Level d : all) {
    int previous = 0;
    for (Level f : all) {
      const int v = classify_pixel(Level::Medium, d, f);
      EXPECT_GE(v, previous);
      previous = v;
    }
  }
}

TEST(ClassifyMoving, ImageExamples) {
  const LevelBands bands = LevelBands::for_eta(4);
  GrayImage f(3, 1), d(3, 1);
  WeightImage w(3, 1);
  f[0] = 150; d[0] = 15; w[0] = 2;
  f[1] = 200; d[1] = 180; w[1] = 1;
  f[2] = 40; d[2] = 20; w[2] = 1;
  const Mask m = classify_moving(f, w, d, bands);
  EXPECT_EQ(m[0], 1);
  EXPECT_EQ(m[1], 0);
  EXPECT_EQ(m[2], 0);
}

TEST(ClassifyMoving, RandomInputsRespectInvariants) {
  oracle::Rng rng(17);
  const LevelBands bands = LevelBands::for_eta(4);
  for (int trial = 0; trial < 50; ++trial) {
    GrayImage f(8, 8), d(8, 8);
    WeightImage w(8, 8);
    for (std::size_t i = 0; i < 64; ++i) {
      f[i] = rng.uniform(0, 255);
      d[i] = rng.uniform(0, 255);
      w[i] = rng.uniform_int(0, 3);
    }
    const Mask m = classify_moving(f, w, d, bands);
    for (std::size_t i = 0; i < 64; ++i) {
      EXPECT_LE(m[i], 1);
      if (w[i] == 3) EXPECT_EQ(m[i], 0);
      EXPECT_EQ(m[i], classify_pixel(bands.weight_level(w[i]), bands.intensity_level(d[i]),
                                     bands.intensity_level(f[i])));
    }
  }
}

TEST(ClassifyMoving, StaticSceneGivesEmptyMask) {
  oracle::Rng rng(3);
  const GrayImage f = oracle::textured_frame(16, 16, rng);
  const ActingBackground bg{4, f, GrayImage(16, 16, 0.0), WeightImage(16, 16, 3)};
  const Mask m = classify_moving(difference_foreground(f, bg), bg.weight, bg.dissimilarity,
                                 LevelBands::for_eta(4));
  for (auto v : m.pixels()) EXPECT_EQ(v, 0);
}

TEST(ClassifyMoving, ShapeMismatch) {
  EXPECT_THROW(classify_moving(GrayImage(2, 2), WeightImage(2, 3), GrayImage(2, 2),
                               LevelBands::for_eta(4)),
               DimensionError);
}
