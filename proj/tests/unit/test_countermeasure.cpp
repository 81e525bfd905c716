#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "blindsim/analytic.hpp"
#include "blindsim/countermeasure.hpp"
#include "test_support.hpp"

namespace blindsim {
namespace {

using test_support::within_binomial;

SessionConfig gated_config(double mu_b, std::uint64_t rounds) {
  SessionConfig c;
  c.intensity.mu_b_eff = mu_b;
  c.intensity.e_pol = 0.0;
  c.rounds = rounds;
  c.countermeasure = true;
  return c;
}

TEST(Gate, MonitorReadsEveryDetector) {
  auto bank = make_detector_bank(DeadTimeModel::binary(2e-6));
  const std::array<double, 4> draws{0.5, 0.5, 0.5, 0.5};
  EXPECT_TRUE(all_detectors_active(bank, 1e-6, draws));
  bank[2].register_click(0.0);
  EXPECT_FALSE(all_detectors_active(bank, 1.8e-6, draws));
  EXPECT_TRUE(all_detectors_active(bank, 2.0e-6, draws));
}

TEST(Gate, GradedMonitorUsesTheDraws) {
  auto bank = make_detector_bank(default_graded_model());
  bank[0].register_click(0.0);
  const std::array<double, 4> low{0.1, 0.9, 0.9, 0.9};
  const std::array<double, 4> high{0.9, 0.1, 0.1, 0.1};
  EXPECT_TRUE(all_detectors_active(bank, 400e-9, low));
  EXPECT_FALSE(all_detectors_active(bank, 400e-9, high));
}

TEST(Gate, PassesEveryRoundWithoutAttack) {
  auto c = gated_config(0.0, 100'000);
  c.attack = false;
  const auto pair = run_session_pair(c);
  EXPECT_EQ(pair.ungated.gate_passed, c.rounds);
  EXPECT_EQ(pair.ungated.gate_kept_fraction.value, 1.0);
}

TEST(Gate, RejectsRoundsWithABlindingClick) {
  RoundSimulator sim(gated_config(1.88, 1));
  int blinded = 0;
  for (std::uint64_t i = 0; i < 20'000; ++i) {
    const auto r = sim.run(i);
    if (r.blinding_clicks.any()) {
      ++blinded;
      EXPECT_FALSE(gate(r));
    } else {
      EXPECT_TRUE(gate(r));
    }
  }
  EXPECT_GT(blinded, 10'000);
}

TEST(Gate, PassFractionIsPoissonVacuum) {
  for (double mu : {0.37, 1.88, 5.29}) {
    const auto r = run_gated_session(gated_config(mu, 1'000'000));
    EXPECT_TRUE(r.gated);
    EXPECT_TRUE(within_binomial(r.gate_kept_fraction.value, std::exp(-mu), 1e6))
        << mu << ": " << r.gate_kept_fraction.value;
    EXPECT_NEAR(r.gate_kept_fraction.value, multi_click_distribution(mu).fired[0], 0.003);
  }
}

TEST(Gate, EveLearnsNothingFromPassingRounds) {
  const auto r = run_gated_session(gated_config(1.88, 3'000'000));
  ASSERT_TRUE(r.qber_be);
  EXPECT_TRUE(within_binomial(r.qber_be->value, 0.5, static_cast<double>(r.sifted_bits())))
      << r.qber_be->value;
  EXPECT_LE(*r.i_eb, 0.01);
}

TEST(Gate, DenialOfServiceAtHighIntensity) {
  const auto r = run_gated_session(gated_config(16.52, 1'000'000));
  // e^-16.52 * 1e6 = 0.067 expected passes.
  EXPECT_LE(r.gate_passed, 3U);
  EXPECT_LE(r.sifted_bits(), r.gate_passed);
  if (r.empty()) {
    EXPECT_FALSE(r.qber_be.has_value());
  }
}

TEST(Gate, NoAttackGatedEqualsUngated) {
  auto c = gated_config(0.0, 200'000);
  c.attack = false;
  c.intensity.e_pol = 0.011;
  const auto pair = run_session_pair(c);
  auto gated = pair.gated;
  gated.gated = false;
  EXPECT_EQ(gated, pair.ungated);
  EXPECT_EQ(run_gated_session(c).bob_key, pair.ungated.bob_key);
}

TEST(Gate, LeavesAliceBobErrorsAlone) {
  auto c = gated_config(1.88, 2'000'000);
  c.intensity.e_pol = 0.011;
  const auto pair = run_session_pair(c);
  const double a = pair.ungated.qber_ab->value;
  const double b = pair.gated.qber_ab->value;
  const double noise = std::hypot(pair.ungated.qber_ab->std_error, pair.gated.qber_ab->std_error);
  EXPECT_LE(std::abs(a - b), 3.0 * noise) << a << " vs " << b;
}

TEST(Gate, GuessesIndependentOfBobsBits) {
  // 2x2 contingency of (Eve bit, Bob bit) over gate-passing sifted rounds.
  auto c = gated_config(0.37, 3'200'000);
  c.seed = 2;
  const auto r = run_gated_session(c);
  const auto n = r.sifted_bits();
  ASSERT_GE(n, 100'000U);
  double table[2][2] = {};
  for (std::size_t k = 0; k < n; ++k) {
    table[to_int(r.eve_key[k])][to_int(r.bob_key[k])] += 1.0;
  }
  double chi2 = 0.0;
  for (int e = 0; e < 2; ++e) {
    for (int b = 0; b < 2; ++b) {
      const double row = table[e][0] + table[e][1];
      const double col = table[0][b] + table[1][b];
      const double expected = row * col / static_cast<double>(n);
      chi2 += (table[e][b] - expected) * (table[e][b] - expected) / expected;
    }
  }
  // One degree of freedom: a 3 sigma deviation is chi2 = 9.
  EXPECT_LT(chi2, 9.0);
}

TEST(Gate, GatedSessionNeedsTheCountermeasure) {
  auto c = gated_config(1.0, 10);
  c.countermeasure = false;
  EXPECT_THROW(run_gated_session(c), ConfigError);
}

}  // namespace
}  // namespace blindsim
