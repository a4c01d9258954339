#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cho/radio.hpp"
#include "support/oracles.hpp"

using namespace cho;
using namespace cho::radio;

TEST(Pathloss, LosHundredMetresAt28GHz) {
  const double pl = pathloss_umi(100.0, 28.0, true);
  EXPECT_NEAR(pl, oracle::pathloss_los_hand(100.0, 28.0), 1e-9);
  EXPECT_NEAR(pl, 103.34, 0.01);
}

TEST(Pathloss, UnitDistanceAndFrequency) { EXPECT_NEAR(pathloss_umi(1.0, 1.0, true), 32.4, 1e-12); }

TEST(Pathloss, NlosNeverBelowLos) {
  for (double d = 1.0; d < 2000.0; d *= 1.07)
    for (double fc : {0.7, 3.5, 28.0, 39.0})
      EXPECT_GE(pathloss_umi(d, fc, false), pathloss_umi(d, fc, true)) << d << " " << fc;
}

TEST(Pathloss, MonotoneInDistance) {
  for (bool los : {true, false}) {
    double prev = pathloss_umi(1.0, 28.0, los);
    for (double d = 1.5; d < 3000.0; d += 0.5) {
      const double pl = pathloss_umi(d, 28.0, los);
      EXPECT_GE(pl, prev - 1e-9) << d;
      prev = pl;
    }
  }
}

TEST(Pathloss, RejectsOutOfRange) {
  EXPECT_THROW(pathloss_umi(0.5, 28.0, true), std::domain_error);
  EXPECT_THROW(pathloss_umi(10.0, 0.1, true), std::domain_error);
  EXPECT_THROW(pathloss_umi(10.0, 200.0, false), std::domain_error);
}

TEST(LosProbability, Values) {
  EXPECT_EQ(los_probability(10.0), 1.0);
  EXPECT_EQ(los_probability(18.0), 1.0);
  EXPECT_NEAR(los_probability(36.0), 0.5 + 0.5 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(los_probability(36.0), 0.6839, 1e-4);
}

TEST(LosProbability, InUnitIntervalAndDecreasing) {
  double prev = 1.0;
  for (double d = 1.0; d < 1000.0; d += 1.0) {
    const double p = los_probability(d);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, prev + 1e-12);
    prev = p;
  }
}

TEST(Shadowing, NoMovementNoChange) {
  Rng rng(7);
  LinkState s{true, 3.5, {10, 10}, 0};
  const auto out = update_shadowing(s, {10, 10}, 4.0, 10.0, rng);
  EXPECT_EQ(out.shadowing_db, 3.5);
}

TEST(Shadowing, CorrelationAtDecorrelationDistance) {
  Rng rng(7);
  LinkState s{true, 5.0, {0, 0}, 0};
  // With zero innovation variance only the rho * previous term survives.
  const auto out = update_shadowing(s, {10, 0}, 0.0, 10.0, rng);
  EXPECT_NEAR(out.shadowing_db / 5.0, std::exp(-1.0), 1e-12);
  EXPECT_NEAR(std::exp(-1.0), 0.3679, 1e-4);
}

TEST(Shadowing, StationaryVarianceAndLagCorrelation) {
  Rng rng(11);
  const double sigma = 4.0;
  const int n = 200000;
  LinkState s{true, 0.0, {0, 0}, 0};
  std::normal_distribution<double> n01;
  s.shadowing_db = sigma * n01(rng);
  double sum = 0, sum2 = 0, cross = 0;
  double prev = s.shadowing_db;
  for (int i = 1; i <= n; ++i) {
    s = update_shadowing(s, {10.0 * i, 0}, sigma, 10.0, rng);
    sum += s.shadowing_db;
    sum2 += s.shadowing_db * s.shadowing_db;
    cross += s.shadowing_db * prev;
    prev = s.shadowing_db;
  }
  const double var = sum2 / n - (sum / n) * (sum / n);
  EXPECT_NEAR(std::sqrt(var), sigma, 0.05);
  EXPECT_NEAR(cross / n / var, std::exp(-1.0), 0.01);
}

TEST(Shadowing, FarMoveDecorrelates) {
  Rng rng(3);
  const int n = 100000;
  double cross = 0, var = 0;
  std::normal_distribution<double> n01;
  for (int i = 0; i < n; ++i) {
    LinkState s{false, 7.82 * n01(rng), {0, 0}, 0};
    const double before = s.shadowing_db;
    s = update_shadowing(s, {1e4, 0}, 7.82, 13.0, rng);
    cross += before * s.shadowing_db;
    var += s.shadowing_db * s.shadowing_db;
  }
  EXPECT_NEAR(std::sqrt(var / n), 7.82, 0.08);
  EXPECT_NEAR(cross / var, 0.0, 0.02);
}

TEST(Link, LosRedrawnOnlyAfterDecorrelationDistance) {
  RadioConfig cfg;
  cfg.los_decorr_m = 50.0;
  Rng rng(5);
  LinkState s = initial_link({0, 0}, 100.0, cfg, rng);
  int draws = 0;
  for (int i = 1; i <= 1000; ++i) {
    const double before = s.travel_since_los_draw_m;
    s = advance_link(s, {1.0 * i, 0}, 100.0, cfg, rng);
    if (s.travel_since_los_draw_m < before) ++draws;
  }
  // 1000 m of travel in 1 m steps, redraw once 50 m is exceeded.
  EXPECT_EQ(draws, 19);
}

TEST(BeamGain, Pattern) {
  RadioConfig cfg;
  const auto p = BeamPattern::sector(0.0, cfg);
  EXPECT_EQ(beam_gain(p, 0, 0.0), 18.0);
  EXPECT_NEAR(beam_gain(p, 0, 13.0), 6.0, 1e-12);
  EXPECT_NEAR(beam_gain(p, 0, -13.0), 6.0, 1e-12);
  EXPECT_EQ(beam_gain(p, 0, 170.0), 18.0 - 25.0);
  EXPECT_THROW(beam_gain(p, 8, 0.0), std::out_of_range);
  EXPECT_THROW(beam_gain(p, -1, 0.0), std::out_of_range);
}

TEST(BeamGain, NonIncreasingWithOffset) {
  RadioConfig cfg;
  const auto p = BeamPattern::sector(0.0, cfg);
  double prev = beam_gain(p, 3, 0.0);
  for (double off = 0.1; off <= 180.0; off += 0.1) {
    const double g = beam_gain(p, 3, off);
    EXPECT_LE(g, prev);
    prev = g;
  }
}

TEST(BeamPattern, PointingTilesSector) {
  RadioConfig cfg;
  const auto p = BeamPattern::sector(120.0, cfg);
  ASSERT_EQ(p.pointing_azimuths_deg.size(), 8u);
  const double step = 120.0 / 8;
  for (int b = 0; b < 8; ++b)
    EXPECT_NEAR(p.pointing_azimuths_deg[static_cast<std::size_t>(b)], 60.0 + step * (b + 0.5), 1e-9);
}

TEST(BeamPattern, FastPathsMatchDirectEvaluation) {
  RadioConfig cfg;
  for (double bore : {0.0, 120.0, -120.0, 179.0}) {
    const auto p = BeamPattern::sector(bore, cfg);
    std::vector<double> row(8);
    for (double az = -180.0; az < 180.0; az += 0.37) {
      double best = -1e300;
      p.gains_toward(az, row);
      for (int b = 0; b < 8; ++b) {
        const double g = beam_gain_toward(p, b, az);
        EXPECT_NEAR(row[static_cast<std::size_t>(b)], g, 1e-9);
        best = std::max(best, g);
      }
      EXPECT_NEAR(p.best_gain_toward(az), best, 1e-9) << bore << " " << az;
      EXPECT_NEAR(beam_gain_toward(p, best_beam(p, az), az), best, 1e-9);
    }
  }
}

TEST(Rsrp, Examples) {
  EXPECT_NEAR(rsrp_dbm(30.0, 103.34, 0.0, 0.0), -73.34, 1e-12);
  EXPECT_EQ(rsrp_dbm(30.0, 0.0, 0.0, 0.0), 30.0);
  EXPECT_NEAR(rsrp_dbm(30.0, 100.0, 3.0, 5.0), rsrp_dbm(30.0, 100.0, 0.0, 5.0) - 3.0, 1e-12);
}

TEST(Sinr, Examples) {
  EXPECT_NEAR(sinr_db(-90.0, {}, -90.0), 0.0, 1e-12);
  const std::vector<double> equal{-70.0};
  EXPECT_NEAR(sinr_db(-70.0, equal, -250.0), 0.0, 1e-9);
  const std::vector<double> one{-73.0};
  const double hand = 10.0 * std::log10(1e-7 / (std::pow(10.0, -7.3) + 1e-10));
  EXPECT_NEAR(sinr_db(-70.0, one, -100.0), hand, 1e-12);
  EXPECT_NEAR(hand, 2.99, 0.005);
}

TEST(Noise, ThermalPlusNoiseFigure) {
  RadioConfig cfg;
  EXPECT_NEAR(cfg.noise_dbm(), -174.0 + 80.0 + 9.0, 1e-9);
}
