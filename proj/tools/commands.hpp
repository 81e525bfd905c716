// Subcommand implementations behind the blindsim executable.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blindsim/otp.hpp"
#include "blindsim/protocol.hpp"
#include "blindsim/spad.hpp"

namespace blindsim::cli {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Blinding intensities used for the default sweep.
inline const std::vector<double> kTableIntensities{0.37, 0.49, 0.83, 1.88,
                                                   5.29, 9.75, 16.52};

/// Flags that override fields of a loaded (or default) SessionConfig.
struct SessionOverrides {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> rounds;
  std::optional<double> mu_s;
  std::optional<double> e_pol;
  std::optional<double> background;
  bool gate = false;
  bool no_attack = false;
};

SessionConfig resolve_config(const SessionOverrides& overrides);

struct SweepOptions {
  SessionOverrides session;
  std::vector<double> mu_b = kTableIntensities;
  std::filesystem::path out = "sweep.csv";
  unsigned jobs = 0;  // 0: hardware concurrency
};

struct SweepPoint {
  double mu_b_eff = 0.0;
  SessionPair sessions;
};

struct SweepOutput {
  std::vector<SweepPoint> points;
  std::string csv;
  std::string json;
};

/// One ungated and one gated session per intensity from a single pass each.
/// The CSV reports the gated keys when `session.gate` is set.
SweepOutput run_sweep(const SweepOptions& options);
/// Runs the sweep and writes the CSV plus a JSON summary next to it
/// (same stem, .json extension).
SweepOutput cmd_sweep(const SweepOptions& options);

struct CurvesOptions {
  double mu_min = 0.0;
  double mu_max = 20.0;
  std::size_t steps = 200;
  double mu_s = 0.1;
  std::optional<std::filesystem::path> out;
};

/// `steps` rows evenly spaced over [mu_min, mu_max] (inclusive).
std::string run_curves(const CurvesOptions& options);
std::string cmd_curves(const CurvesOptions& options);

struct CharacterizeOptions {
  double dead_time_s = 400e-9;
  double jitter_s = 30e-9;
  double recharge_s = 100e-9;
  std::size_t delay_count = 50;
  double first_delay_s = 50e-9;
  double last_delay_s = 3.5e-6;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  /// Fit the exact recovery curve instead of a simulated scan.
  bool noiseless = false;
  std::optional<std::filesystem::path> out;
};

struct CharacterizeOutput {
  DeadTimeModel truth;
  std::vector<EfficiencySample> samples;
  RecoveryFit fit;
  std::string report;
};

CharacterizeOutput cmd_characterize(const CharacterizeOptions& options);

struct OtpOptions {
  SessionOverrides session;
  std::optional<std::filesystem::path> image;
  /// Used when no image is given.
  int pattern_width = 64;
  int pattern_height = 64;
  std::optional<double> mu_b;
  std::filesystem::path out_dir = "otp_out";
  /// Test hook: replace every key with zeros.
  bool zero_key = false;
};

struct OtpOutput {
  SessionConfig config;
  SessionResult session;
  OtpDemo demo;
  std::string report;
};

/// Picks the round count from a pilot run (3x the required key material)
/// unless --rounds is given, then writes ciphertext.pgm, bob.pgm, eve.pgm,
/// the three key files, session.json and report.json into out_dir.
OtpOutput cmd_otp(const OtpOptions& options);

}  // namespace blindsim::cli
