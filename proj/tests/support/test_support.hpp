#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace test_support {

/// |observed - expected| <= k * sigma for a binomial proportion over n trials,
/// with sigma taken at the expected value.
inline bool within_binomial(double observed, double expected, double n,
                            double k = 3.0) {
  const double sigma = std::sqrt(expected * (1.0 - expected) / n);
  return std::abs(observed - expected) <= k * sigma;
}

/// Like within_binomial, but for rare outcomes (expected count below 25) the
/// normal bound is replaced by exact Poisson tails at the same two-sided
/// level as 3 sigma.
inline bool plausible_fraction(double observed, double expected, double n) {
  const double mean = expected * n;
  if (mean >= 25.0) return within_binomial(observed, expected, n);
  const auto count = static_cast<long>(std::llround(observed * n));
  double term = std::exp(-mean);
  double below = 0.0;  // P(X < count)
  for (long j = 0; j < count; ++j) {
    below += term;
    term *= mean / static_cast<double>(j + 1);
  }
  const double at_most = below + term;
  constexpr double kTail = 0.0027 / 2.0;
  return at_most > kTail && 1.0 - below > kTail;
}

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("blindsim_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace test_support
