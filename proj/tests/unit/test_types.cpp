#include <gtest/gtest.h>

#include "blindsim/types.hpp"

namespace blindsim {
namespace {

TEST(Projection, ParallelOrthogonalDiagonal) {
  EXPECT_DOUBLE_EQ(projection_coefficient(Polarization::H, Polarization::H), 0.5);
  EXPECT_DOUBLE_EQ(projection_coefficient(Polarization::H, Polarization::V), 0.0);
  EXPECT_DOUBLE_EQ(projection_coefficient(Polarization::H, Polarization::P45), 0.25);
}

TEST(Projection, EveryPhotonLandsSomewhere) {
  for (auto s : kPolarizations) {
    double total = 0.0;
    double with_misalignment = 0.0;
    double with_leak = 0.0;
    for (auto d : kPolarizations) {
      total += projection_coefficient(s, d);
      with_misalignment += signal_coefficient(s, d, 0.011);
      with_leak += blinding_coefficient(s, d, 0.03);
    }
    EXPECT_DOUBLE_EQ(total, 1.0) << to_string(s);
    EXPECT_DOUBLE_EQ(with_misalignment, 1.0) << to_string(s);
    EXPECT_DOUBLE_EQ(with_leak, 1.0) << to_string(s);
  }
}

TEST(Projection, MisalignmentMovesWeightToOrthogonalOnly) {
  EXPECT_DOUBLE_EQ(signal_coefficient(Polarization::V, Polarization::V, 0.1), 0.45);
  EXPECT_DOUBLE_EQ(signal_coefficient(Polarization::V, Polarization::H, 0.1), 0.05);
  EXPECT_DOUBLE_EQ(signal_coefficient(Polarization::V, Polarization::M45, 0.1), 0.25);
  for (auto s : kPolarizations) {
    for (auto d : kPolarizations) {
      EXPECT_DOUBLE_EQ(signal_coefficient(s, d, 0.0), projection_coefficient(s, d));
      EXPECT_DOUBLE_EQ(blinding_coefficient(s, d, 0.0), projection_coefficient(s, d));
    }
  }
}

TEST(Orthogonal, Examples) {
  EXPECT_EQ(orthogonal(Polarization::H), Polarization::V);
  EXPECT_EQ(orthogonal(Polarization::M45), Polarization::P45);
}

TEST(Orthogonal, IsAnInvolutionWithinTheBasis) {
  for (auto p : kPolarizations) {
    EXPECT_EQ(orthogonal(orthogonal(p)), p);
    EXPECT_NE(orthogonal(p), p);
    EXPECT_EQ(basis_of(orthogonal(p)), basis_of(p));
    EXPECT_EQ(encode(orthogonal(p)), flip(encode(p)));
  }
}

TEST(Encoding, FixedBitMapping) {
  EXPECT_EQ(encode(Polarization::H), KeyBit::Zero);
  EXPECT_EQ(encode(Polarization::V), KeyBit::One);
  EXPECT_EQ(encode(Polarization::P45), KeyBit::Zero);
  EXPECT_EQ(encode(Polarization::M45), KeyBit::One);
}

TEST(Encoding, RoundTrip) {
  for (auto p : kPolarizations) EXPECT_EQ(decode(basis_of(p), encode(p)), p);
  for (auto b : {Basis::Rectilinear, Basis::Diagonal}) {
    for (auto k : {KeyBit::Zero, KeyBit::One}) {
      EXPECT_EQ(basis_of(decode(b, k)), b);
      EXPECT_EQ(encode(decode(b, k)), k);
    }
  }
}

TEST(Encoding, DetectorIndexOrder) {
  for (std::size_t i = 0; i < kPolarizations.size(); ++i) {
    EXPECT_EQ(index_of(kPolarizations[i]), i);
  }
}

TEST(Polarization, ParseAndPrint) {
  for (auto p : kPolarizations) EXPECT_EQ(parse_polarization(to_string(p)), p);
  EXPECT_EQ(parse_polarization("+45"), Polarization::P45);
  EXPECT_EQ(parse_polarization("-45"), Polarization::M45);
  EXPECT_THROW(parse_polarization("D"), std::invalid_argument);
  EXPECT_THROW(parse_polarization(""), std::invalid_argument);
}

TEST(Timing, DefaultsAreValid) {
  const TimingConfig t;
  EXPECT_NO_THROW(t.validate());
  EXPECT_DOUBLE_EQ(t.period_s, 4e-6);
  EXPECT_DOUBLE_EQ(t.window_s, 5e-9);
  EXPECT_DOUBLE_EQ(t.blinding_offset_s, 200e-9);
  EXPECT_DOUBLE_EQ(t.dead_time_s, 2e-6);
  EXPECT_DOUBLE_EQ(t.slot_time(3), 12e-6);
}

TEST(Timing, RejectsOffsetInsideHalfWindow) {
  TimingConfig t;
  t.blinding_offset_s = 2.5e-9;  // equal to window / 2
  EXPECT_THROW(t.validate(), ConfigError);
  t.blinding_offset_s = 1e-9;
  EXPECT_THROW(t.validate(), ConfigError);
}

TEST(Timing, RejectsOffsetBeyondDeadTime) {
  TimingConfig t;
  t.blinding_offset_s = 2e-6;
  EXPECT_THROW(t.validate(), ConfigError);
}

TEST(Timing, RejectsPeriodTooShort) {
  TimingConfig t;
  t.period_s = 2.2e-6;  // == dead time + offset
  EXPECT_THROW(t.validate(), ConfigError);
  t.period_s = 2.2000001e-6;
  EXPECT_NO_THROW(t.validate());
}

TEST(Timing, RejectsNonPositive) {
  TimingConfig t;
  t.window_s = 0.0;
  EXPECT_THROW(t.validate(), ConfigError);
  t = {};
  t.dead_time_s = -1.0;
  EXPECT_THROW(t.validate(), ConfigError);
}

TEST(Timing, ValidationGridMatchesInequalities) {
  // Every combination on a coarse grid is accepted exactly when the three
  // inequalities hold.
  const double windows[] = {1e-9, 5e-9, 100e-9};
  const double offsets[] = {1e-9, 50e-9, 200e-9, 1e-6, 3e-6};
  const double deads[] = {100e-9, 2e-6};
  const double periods[] = {1e-6, 2.3e-6, 4e-6};
  for (double w : windows) {
    for (double o : offsets) {
      for (double d : deads) {
        for (double p : periods) {
          TimingConfig t{p, w, o, d};
          const bool ok = w / 2 < o && o < d && p > d + o;
          if (ok) {
            EXPECT_NO_THROW(t.validate()) << w << ' ' << o << ' ' << d << ' ' << p;
          } else {
            EXPECT_THROW(t.validate(), ConfigError) << w << ' ' << o << ' ' << d << ' ' << p;
          }
        }
      }
    }
  }
}

TEST(Intensity, DefaultsAreValid) {
  const IntensityConfig in;
  EXPECT_NO_THROW(in.validate());
  EXPECT_DOUBLE_EQ(in.e_pol, 0.011);
  EXPECT_DOUBLE_EQ(in.background, 0.0);
}

TEST(Intensity, FromRawMultipliesTransmission) {
  const auto in = IntensityConfig::from_raw({40.0, 0.25}, {0.5, 0.2});
  EXPECT_DOUBLE_EQ(in.mu_b_eff, 10.0);
  EXPECT_DOUBLE_EQ(in.mu_s_eff, 0.1);
  EXPECT_NO_THROW(in.validate());
}

TEST(Intensity, RejectsRawMismatch) {
  auto in = IntensityConfig::from_raw({40.0, 0.25}, {0.5, 0.2});
  in.mu_b_eff = 11.0;
  EXPECT_THROW(in.validate(), ConfigError);
}

TEST(Intensity, RejectsOutOfRange) {
  IntensityConfig in;
  in.mu_b_eff = -1.0;
  EXPECT_THROW(in.validate(), ConfigError);
  in = {};
  in.mu_s_eff = std::numeric_limits<double>::infinity();
  EXPECT_THROW(in.validate(), ConfigError);
  in = {};
  in.e_pol = 0.5;
  EXPECT_THROW(in.validate(), ConfigError);
  in = {};
  in.background = 1.0;
  EXPECT_THROW(in.validate(), ConfigError);
  in = {};
  in.extinction = -0.1;
  EXPECT_THROW(in.validate(), ConfigError);
  in = {};
  in.blinding_raw = RawIntensity{-1.0, 0.5};
  EXPECT_THROW(in.validate(), ConfigError);
}

}  // namespace
}  // namespace blindsim
