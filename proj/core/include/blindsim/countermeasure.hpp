// Key generation restricted to rounds in which every detector was verifiably
// active (e.g. from a bias-voltage monitor) just before the signal window.
#pragma once

#include <span>

#include "blindsim/protocol.hpp"

namespace blindsim {

/// Status a detector monitor would report at time t. `draws` are the
/// per-detector activity draws of the round (only the graded model uses them).
bool all_detectors_active(const DetectorBank& detectors, double t,
                          std::span<const double, kDetectorCount> draws);

/// Whether a round may contribute to the key. Reads the gate status that
/// run_round captured at t_i - window/2.
inline bool gate(const RoundRecord& record) noexcept {
  return record.all_detectors_active;
}

/// As run_session, but keys are built only from rounds passing the gate.
/// Throws ConfigError unless config.countermeasure is set.
SessionResult run_gated_session(const SessionConfig& config);

}  // namespace blindsim
