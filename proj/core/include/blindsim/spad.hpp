// Single-photon avalanche diode dead time.
//
// Recovery after a click is either binary (blind for tau_d, then fully
// efficient) or graded:
//
//   E(t') = 1/2 * (1 + erf((t' - tau_d) / tau_2)) * (1 - exp(-t' / tau_3))
//
// where tau_2 is the discrimination jitter and tau_3 the recharge time.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "blindsim/types.hpp"

namespace blindsim {

struct DeadTimeModel {
  enum class Mode : std::uint8_t { Binary, Graded };

  Mode mode = Mode::Binary;
  double dead_time_s = 2e-6;
  /// Graded only.
  double jitter_s = 0.0;
  double recharge_s = 0.0;

  static DeadTimeModel binary(double dead_time_s);
  static DeadTimeModel graded(double dead_time_s, double jitter_s,
                              double recharge_s);

  void validate() const;

  friend bool operator==(const DeadTimeModel&, const DeadTimeModel&) = default;
};

/// Graded model with the test-fixture constants 400 ns / 30 ns / 100 ns.
DeadTimeModel default_graded_model();

/// Detection efficiency t_prime seconds after the previous click, relative to
/// a fully recovered detector. Throws std::domain_error for t_prime < 0.
double relative_efficiency(const DeadTimeModel& model, double t_prime);

class DetectorState {
 public:
  DetectorState(Polarization detector, DeadTimeModel model)
      : detector_(detector), model_(model) {}

  [[nodiscard]] Polarization detector() const noexcept { return detector_; }
  [[nodiscard]] std::optional<double> last_click() const noexcept {
    return last_click_;
  }
  [[nodiscard]] const DeadTimeModel& model() const noexcept { return model_; }

  /// Whether the detector can fire at time t. The graded model fires with
  /// probability E(t - last_click); `draw` in [0, 1) decides it, so the result
  /// is a pure function of the arguments. Throws std::domain_error if t
  /// precedes the last click.
  [[nodiscard]] bool is_active(double t, double draw) const;

  /// Throws std::domain_error on out-of-order timestamps.
  void register_click(double t);

 private:
  Polarization detector_;
  DeadTimeModel model_;
  std::optional<double> last_click_;
};

inline bool is_active(const DetectorState& state, double t, double draw) {
  return state.is_active(t, draw);
}

inline DetectorState register_click(DetectorState state, double t) {
  state.register_click(t);
  return state;
}

struct EfficiencySample {
  double delay_s = 0.0;
  double efficiency = 0.0;
};

inline constexpr double kReferenceDelay = 3.5e-6;

/// Two-pulse dead-time characterization: a click at t = 0, then a second
/// detection opportunity at each delay. Fractions are divided by the
/// fraction observed at `reference_delay_s` (pass std::nullopt for raw
/// fractions). Delay k uses random stream k; the reference uses stream
/// delays.size().
std::vector<EfficiencySample> simulate_two_pulse_scan(
    const DeadTimeModel& model, std::span<const double> delays,
    std::uint64_t trials_per_delay, std::uint64_t seed,
    std::optional<double> reference_delay_s = kReferenceDelay);

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RecoveryFit {
  double dead_time_s = 0.0;
  double jitter_s = 0.0;
  double recharge_s = 0.0;
  /// Sum of squared residuals.
  double residual = 0.0;
  int iterations = 0;

  [[nodiscard]] DeadTimeModel model() const {
    return DeadTimeModel::graded(dead_time_s, jitter_s, recharge_s);
  }
};

/// Least-squares fit of the graded recovery curve. A coarse logarithmic grid
/// over (tau_d, tau_2, tau_3) seeds descents from its 8 best points. Each
/// descent runs golden-section line searches in log space, starting along the
/// parameter axes and replacing one direction per sweep by the sweep's net
/// displacement. It stops when every parameter moves by less than 1e-6
/// relative, or after 200 sweeps. The best descent wins.
RecoveryFit fit_recovery_curve(std::span<const EfficiencySample> samples);

/// n delays evenly spaced over [first, last].
std::vector<double> linear_delays(double first, double last, std::size_t n);

}  // namespace blindsim
