// Monte Carlo BB84 session under the dead-time blinding attack.
//
// Each round i:
//   1. (attack) Eve picks a polarization uniformly and fires a blinding pulse
//      at t_i - delta; each detector clicks independently with
//      1 - exp(-mu_b * c) and goes dead.
//   2. The gate status (all four detectors active) is sampled at
//      t_i - window/2.
//   3. Alice sends a uniformly random BB84 state; each detector that is
//      active at t_i clicks with 1 - exp(-mu_s * c'), c' misalignment-adjusted.
//   4. Active detectors also fire on background with probability d.
//   5. Multiple clicks are squashed to one uniformly chosen detector.
//   6. Bob announces his basis; Alice replies kept / not kept.
//   7. Eve guesses the bit of every kept round from her own pulse and the
//      public announcement only.
//
// Random draws per round come from RandomStream(seed, i) in this fixed order:
// 4 activity draws, [polarization, 4 blinding clicks] if attacking, Alice's
// basis, Alice's bit, 4 signal clicks, 4 background clicks, squash choice
// (only on >= 2 clicks), Eve's coin (only for kept rounds she cannot infer).
// A detector's activity draw is reused for every instant within the round;
// recovery is monotone in time, so this is consistent.
#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blindsim/rng.hpp"
#include "blindsim/spad.hpp"
#include "blindsim/types.hpp"

namespace blindsim {

class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);

  void push_back(KeyBit b) { bits_.push_back(static_cast<std::uint8_t>(b)); }
  void reserve(std::size_t n) { bits_.reserve(n); }
  [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
  [[nodiscard]] bool empty() const noexcept { return bits_.empty(); }
  [[nodiscard]] KeyBit operator[](std::size_t i) const noexcept {
    return static_cast<KeyBit>(bits_[i]);
  }
  /// One byte per bit, each 0 or 1.
  [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept {
    return bits_;
  }

  /// Parses a string of '0' / '1' characters.
  static BitString from_string(std::string_view text);
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Mismatch fraction and its binomial standard error sqrt(q(1-q)/n).
/// Throws std::invalid_argument for empty or unequal-length keys.
Estimate compute_qber(const BitString& a, const BitString& b);

using DetectorSet = std::bitset<kDetectorCount>;
using DetectorBank = std::array<DetectorState, kDetectorCount>;

DetectorBank make_detector_bank(const DeadTimeModel& model);

struct SessionConfig {
  TimingConfig timing;
  IntensityConfig intensity;
  DeadTimeModel dead_time = DeadTimeModel::binary(2e-6);
  std::uint64_t rounds = 1'000'000;
  std::uint64_t seed = 1;
  bool attack = true;
  bool countermeasure = false;

  /// Also checks the attack timing window against the detector model's own
  /// dead time.
  void validate() const;
};

struct SiftAnnouncement {
  std::uint64_t round = 0;
  Basis bob_basis = Basis::Rectilinear;
  bool kept = false;
};

struct RoundRecord {
  std::uint64_t index = 0;
  std::optional<Polarization> blinding;
  DetectorSet blinding_clicks;
  Polarization alice = Polarization::H;
  DetectorSet signal_clicks;
  std::optional<Polarization> bob_outcome;
  std::optional<SiftAnnouncement> announcement;
  bool sifted = false;
  KeyBit alice_bit = KeyBit::Zero;
  KeyBit bob_bit = KeyBit::Zero;
  std::optional<KeyBit> eve_guess;
  /// All four detectors active at t_i - window/2.
  bool all_detectors_active = true;
};

/// Eve's inference from her own pulse polarization and Bob's public basis.
/// Same basis: Alice's photon can only have reached the unblinded orthogonal
/// detector. Other basis: both candidates are blinded alike, so a fair coin.
KeyBit eve_guess(Polarization blinding, const SiftAnnouncement& announcement,
                 RandomStream& rng);

/// Runs one round against `detectors`, which carry dead-time state between
/// rounds.
RoundRecord run_round(const SessionConfig& config, DetectorBank& detectors,
                      RandomStream& rng, std::uint64_t index);

/// Precomputed per-config click tables plus the detector bank for a session.
class RoundSimulator {
 public:
  explicit RoundSimulator(const SessionConfig& config);

  /// Uses the simulator's own detector bank and RandomStream(seed, index).
  RoundRecord run(std::uint64_t index);
  RoundRecord run(std::uint64_t index, RandomStream& rng,
                  DetectorBank& detectors) const;

 private:
  SessionConfig config_;
  DetectorBank detectors_;
  // [pulse polarization][detector]
  std::array<std::array<double, kDetectorCount>, kDetectorCount> blind_click_{};
  std::array<std::array<double, kDetectorCount>, kDetectorCount> signal_click_{};
};

struct SessionResult {
  std::uint64_t rounds = 0;
  /// Rounds in which Bob registered an outcome.
  std::uint64_t detections = 0;
  BitString alice_key;
  BitString bob_key;
  BitString eve_key;
  /// Absent when no bits were sifted.
  std::optional<Estimate> qber_ab;
  std::optional<Estimate> qber_be;
  std::optional<double> i_eb;
  std::optional<double> overlap;
  /// Rounds in which k detectors fired on the blinding pulse (k = 0..4).
  std::array<std::uint64_t, kDetectorCount + 1> blinding_counts{};
  std::array<Estimate, kDetectorCount + 1> blinding_histogram{};
  /// Rounds whose gate status was "all detectors active".
  std::uint64_t gate_passed = 0;
  Estimate gate_kept_fraction;
  bool gated = false;

  [[nodiscard]] std::size_t sifted_bits() const noexcept {
    return alice_key.size();
  }
  [[nodiscard]] bool empty() const noexcept { return alice_key.empty(); }

  friend bool operator==(const SessionResult&, const SessionResult&) = default;
};

/// Folds round records into a SessionResult; with `gated`, only rounds that
/// pass the all-detectors-active gate contribute key bits.
class SessionAccumulator {
 public:
  explicit SessionAccumulator(bool gated, std::uint64_t expected_rounds = 0);

  void add(const RoundRecord& record);
  [[nodiscard]] SessionResult finish() const;

 private:
  SessionResult partial_;
};

/// Visits every round of a session in index order.
template <class Visitor>
void for_each_round(const SessionConfig& config, Visitor&& visit) {
  config.validate();
  RoundSimulator sim(config);
  for (std::uint64_t i = 0; i < config.rounds; ++i) {
    visit(sim.run(i));
  }
}

SessionResult run_session(const SessionConfig& config);

struct SessionPair {
  SessionResult ungated;
  SessionResult gated;
};

/// Ungated and gated statistics from a single simulation pass.
SessionPair run_session_pair(const SessionConfig& config);

}  // namespace blindsim
