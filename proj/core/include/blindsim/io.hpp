// File formats: session configs and results as JSON, sifted keys as packed
// binary (most significant bit first, zero-padded final byte), and the CSV
// conventions shared by the command-line tools.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blindsim/analytic.hpp"
#include "blindsim/protocol.hpp"
#include "blindsim/spad.hpp"

namespace blindsim {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a config; absent fields keep their defaults, unknown fields are
/// rejected. Throws ConfigError. The detector model defaults to binary with
/// timing.dead_time_s; effective intensities may be given directly or as
/// "blinding_raw" / "signal_raw" {mean_photons, transmission}.
SessionConfig session_config_from_json(std::string_view text);
SessionConfig load_session_config(const std::filesystem::path& path);
std::string session_config_to_json(const SessionConfig& config);

struct KeyFileNames {
  std::string alice;
  std::string bob;
  std::string eve;
};

/// Snake-case JSON; undefined statistics are written as null. Gated results
/// additionally carry "kept_fraction".
std::string session_result_to_json(
    const SessionResult& result,
    const std::optional<KeyFileNames>& key_files = std::nullopt);

std::vector<std::uint8_t> pack_bits(const BitString& bits);
/// Throws std::invalid_argument if `bytes` cannot hold `bit_count` bits or the
/// padding bits are not zero.
BitString unpack_bits(std::span<const std::uint8_t> bytes,
                      std::size_t bit_count);

void write_key_file(const std::filesystem::path& path, const BitString& bits);
BitString read_key_file(const std::filesystem::path& path,
                        std::size_t bit_count);

/// Writes `content` verbatim (binary mode, so LF line endings stay LF).
void write_text_file(const std::filesystem::path& path,
                     std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// Six significant digits, '.' decimal separator, independent of locale.
std::string format_sig6(double value);
/// Empty field for absent values.
std::string format_sig6(const std::optional<double>& value);

/// Header mu_b_eff,p0,p1,p2,p3,pr_eve_wrong,info_bits.
std::string curves_csv(std::span<const CurvePoint> points);

/// Header delay_s,efficiency.
std::string scan_csv(std::span<const EfficiencySample> samples);

}  // namespace blindsim
