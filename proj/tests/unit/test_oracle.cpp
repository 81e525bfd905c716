// Cross-checks the enumeration oracle against values computed by an
// independent script, so the oracle itself is trusted before it judges the
// simulator.
#include <gtest/gtest.h>

#include "round_enumeration.hpp"

namespace {

TEST(EnumerationOracle, MatchesReferenceValues) {
  const struct {
    double mu;
    double qber_be;
    double kept;
  } rows[] = {{0.37, 0.4768903380342415, 0.04355929700032694},
              {0.49, 0.4694106839446968, 0.04236700384651846},
              {0.83, 0.44829901928199806, 0.039252792566299856},
              {1.88, 0.38451986518001086, 0.031675554995381},
              {5.29, 0.2097578397355817, 0.01938474961089866},
              {9.75, 0.07971739875427866, 0.01436351053219203},
              {16.52, 0.015647896388241732, 0.01257829829906149}};
  for (const auto& r : rows) {
    oracle::RoundParams p;
    p.mu_b = r.mu;
    const auto e = oracle::enumerate_round(p);
    EXPECT_NEAR(e.qber_be, r.qber_be, 1e-12) << r.mu;
    EXPECT_NEAR(e.kept_rate, r.kept, 1e-14) << r.mu;
    EXPECT_EQ(e.qber_ab, 0.0);
  }
}

TEST(EnumerationOracle, NoAttackMeansCoinFlips) {
  oracle::RoundParams p;
  p.attack = false;
  p.e_pol = 0.011;
  const auto e = oracle::enumerate_round(p);
  EXPECT_DOUBLE_EQ(e.qber_be, 0.5);
  EXPECT_NEAR(e.qber_ab, 0.011, 2e-4);
  EXPECT_DOUBLE_EQ(e.gate_pass, 1.0);
}

TEST(EnumerationOracle, GatedRoundsCarryNoInformation) {
  for (double mu : {0.37, 1.88, 9.75}) {
    oracle::RoundParams p;
    p.mu_b = mu;
    p.gated = true;
    const auto e = oracle::enumerate_round(p);
    EXPECT_NEAR(e.qber_be, 0.5, 1e-15);
    EXPECT_NEAR(e.gate_pass, std::exp(-mu), 1e-15);
  }
}

}  // namespace
