#include "blindsim/countermeasure.hpp"

#include <algorithm>

namespace blindsim {

bool all_detectors_active(const DetectorBank& detectors, double t,
                          std::span<const double, kDetectorCount> draws) {
  for (std::size_t d = 0; d < kDetectorCount; ++d) {
    if (!detectors[d].is_active(t, draws[d])) return false;
  }
  return true;
}

SessionResult run_gated_session(const SessionConfig& config) {
  if (!config.countermeasure) {
    throw ConfigError("gated session requested with the countermeasure off");
  }
  SessionAccumulator acc(true, config.rounds);
  for_each_round(config, [&](const RoundRecord& rec) { acc.add(rec); });
  return acc.finish();
}

}  // namespace blindsim
