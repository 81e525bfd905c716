#include "blindsim/types.hpp"

#include <cmath>

#include <fmt/format.h>

namespace blindsim {

std::string_view to_string(Polarization p) noexcept {
  switch (p) {
    case Polarization::H: return "H";
    case Polarization::V: return "V";
    case Polarization::P45: return "P45";
    case Polarization::M45: return "M45";
  }
  return "?";
}

std::string_view to_string(Basis b) noexcept {
  return b == Basis::Rectilinear ? "rectilinear" : "diagonal";
}

Polarization parse_polarization(std::string_view text) {
  if (text == "H") return Polarization::H;
  if (text == "V") return Polarization::V;
  if (text == "P45" || text == "+45") return Polarization::P45;
  if (text == "M45" || text == "-45") return Polarization::M45;
  throw std::invalid_argument(fmt::format("unknown polarization '{}'", text));
}

void TimingConfig::validate() const {
  if (!(period_s > 0.0) || !(window_s > 0.0) || !(blinding_offset_s > 0.0) ||
      !(dead_time_s > 0.0)) {
    throw ConfigError("timing values must be positive");
  }
  if (!(window_s / 2.0 < blinding_offset_s)) {
    throw ConfigError(fmt::format(
        "blinding offset {} s must exceed half the time window ({} s)",
        blinding_offset_s, window_s / 2.0));
  }
  if (!(blinding_offset_s < dead_time_s)) {
    throw ConfigError(fmt::format(
        "blinding offset {} s must be shorter than the dead time {} s",
        blinding_offset_s, dead_time_s));
  }
  if (!(period_s > dead_time_s + blinding_offset_s)) {
    throw ConfigError(fmt::format(
        "period {} s must exceed dead time + blinding offset ({} s)", period_s,
        dead_time_s + blinding_offset_s));
  }
}

IntensityConfig IntensityConfig::from_raw(RawIntensity blinding,
                                          RawIntensity signal) {
  IntensityConfig cfg;
  cfg.blinding_raw = blinding;
  cfg.signal_raw = signal;
  cfg.mu_b_eff = blinding.effective();
  cfg.mu_s_eff = signal.effective();
  return cfg;
}

namespace {

void check_raw(const std::optional<RawIntensity>& raw, double eff,
               std::string_view name) {
  if (!raw) return;
  if (!(raw->mean_photons >= 0.0) || !(raw->transmission >= 0.0) ||
      raw->transmission > 1.0) {
    throw ConfigError(fmt::format("raw {} intensity out of range", name));
  }
  if (raw->effective() != eff) {
    throw ConfigError(fmt::format(
        "{} effective intensity {} != transmission * mean photons ({})", name,
        eff, raw->effective()));
  }
}

}  // namespace

void IntensityConfig::validate() const {
  if (!(mu_b_eff >= 0.0) || !std::isfinite(mu_b_eff)) {
    throw ConfigError("mu_b_eff must be a finite value >= 0");
  }
  if (!(mu_s_eff >= 0.0) || !std::isfinite(mu_s_eff)) {
    throw ConfigError("mu_s_eff must be a finite value >= 0");
  }
  check_raw(blinding_raw, mu_b_eff, "blinding");
  check_raw(signal_raw, mu_s_eff, "signal");
  if (!(e_pol >= 0.0 && e_pol < 0.5)) {
    throw ConfigError("e_pol must lie in [0, 0.5)");
  }
  if (!(background >= 0.0 && background < 1.0)) {
    throw ConfigError("background must lie in [0, 1)");
  }
  if (!(extinction >= 0.0 && extinction < 1.0)) {
    throw ConfigError("extinction must lie in [0, 1)");
  }
}

}  // namespace blindsim
