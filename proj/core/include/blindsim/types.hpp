// Shared vocabulary for the blinding-attack simulator: BB84 signal alphabet,
// bit encoding, link timing and intensities, and the projection geometry of
// a passive four-detector receiver (50/50 beam splitter + two PBS analyzers).
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace blindsim {

/// Raised when a configuration value violates its documented invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Polarization : std::uint8_t { H = 0, V = 1, P45 = 2, M45 = 3 };
enum class Basis : std::uint8_t { Rectilinear = 0, Diagonal = 1 };
enum class KeyBit : std::uint8_t { Zero = 0, One = 1 };

/// Receiver detectors are indexed in this order everywhere (H, V, +45, -45).
inline constexpr std::array<Polarization, 4> kPolarizations{
    Polarization::H, Polarization::V, Polarization::P45, Polarization::M45};
inline constexpr std::size_t kDetectorCount = kPolarizations.size();

constexpr std::size_t index_of(Polarization p) noexcept {
  return static_cast<std::size_t>(p);
}

constexpr Basis basis_of(Polarization p) noexcept {
  return (p == Polarization::H || p == Polarization::V) ? Basis::Rectilinear
                                                        : Basis::Diagonal;
}

constexpr Polarization orthogonal(Polarization p) noexcept {
  switch (p) {
    case Polarization::H: return Polarization::V;
    case Polarization::V: return Polarization::H;
    case Polarization::P45: return Polarization::M45;
    case Polarization::M45: return Polarization::P45;
  }
  return p;
}

/// H,+45 -> 0 and V,-45 -> 1.
constexpr KeyBit encode(Polarization p) noexcept {
  return (p == Polarization::H || p == Polarization::P45) ? KeyBit::Zero
                                                          : KeyBit::One;
}

constexpr Polarization decode(Basis b, KeyBit bit) noexcept {
  if (b == Basis::Rectilinear) {
    return bit == KeyBit::Zero ? Polarization::H : Polarization::V;
  }
  return bit == KeyBit::Zero ? Polarization::P45 : Polarization::M45;
}

constexpr KeyBit flip(KeyBit b) noexcept {
  return b == KeyBit::Zero ? KeyBit::One : KeyBit::Zero;
}

constexpr int to_int(KeyBit b) noexcept { return static_cast<int>(b); }

/// Fraction of a pulse's mean photon number that reaches `detector` for a
/// pulse polarized along `signal`: 1/2 parallel, 1/4 for either detector of
/// the conjugate basis, 0 orthogonal.
constexpr double projection_coefficient(Polarization signal,
                                        Polarization detector) noexcept {
  if (detector == signal) return 0.5;
  if (detector == orthogonal(signal)) return 0.0;
  return 0.25;
}

/// Signal-path coefficient with polarization misalignment: a photon bound for
/// the parallel detector lands in the orthogonal one with probability e_pol.
constexpr double signal_coefficient(Polarization signal, Polarization detector,
                                    double e_pol) noexcept {
  if (detector == signal) return 0.5 * (1.0 - e_pol);
  if (detector == orthogonal(signal)) return 0.5 * e_pol;
  return 0.25;
}

/// Blinding-path coefficient; `extinction` leaks into the orthogonal detector.
constexpr double blinding_coefficient(Polarization pulse, Polarization detector,
                                      double extinction) noexcept {
  if (detector == pulse) return 0.5 * (1.0 - extinction);
  if (detector == orthogonal(pulse)) return 0.5 * extinction;
  return 0.25;
}

std::string_view to_string(Polarization p) noexcept;
std::string_view to_string(Basis b) noexcept;
/// Accepts "H", "V", "P45"/"+45", "M45"/"-45".
Polarization parse_polarization(std::string_view text);

/// Link timing. All values in seconds.
struct TimingConfig {
  double period_s = 4e-6;
  double window_s = 5e-9;
  /// delta = t_i - t_{B,i}: how far ahead of the signal slot Eve's pulse lands.
  double blinding_offset_s = 200e-9;
  double dead_time_s = 2e-6;

  /// Enforces window/2 < offset < dead time and period > dead time + offset.
  void validate() const;

  /// Start of the signal slot i.
  [[nodiscard]] double slot_time(std::uint64_t round) const noexcept {
    return static_cast<double>(round) * period_s;
  }
};

/// A source-side mean photon number and its channel transmission.
struct RawIntensity {
  double mean_photons = 0.0;
  double transmission = 1.0;

  [[nodiscard]] double effective() const noexcept {
    return transmission * mean_photons;
  }
};

struct IntensityConfig {
  /// Mean photons per blinding pulse into an ideal receiver.
  double mu_b_eff = 0.0;
  /// Mean photons per signal pulse at the receiver.
  double mu_s_eff = 0.1;
  std::optional<RawIntensity> blinding_raw;
  std::optional<RawIntensity> signal_raw;
  double e_pol = 0.011;
  /// Per-detector background click probability inside one window.
  double background = 0.0;
  double extinction = 0.0;

  /// Builds effective intensities from raw source values and transmissions.
  static IntensityConfig from_raw(RawIntensity blinding, RawIntensity signal);

  void validate() const;
};

}  // namespace blindsim
