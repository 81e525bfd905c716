// One-time-pad demonstration on binary PGM images: Alice encrypts the pixel
// payload with her sifted key, Bob and Eve decrypt with theirs.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "blindsim/protocol.hpp"

namespace blindsim {

class PgmError : public std::runtime_error {
 public:
  PgmError(const std::string& what, std::size_t offset);
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// 8-bit binary PGM (P5). The header bytes are kept verbatim so a
/// parse/serialize round trip is byte-exact.
struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint8_t> header;
  std::vector<std::uint8_t> pixels;

  friend bool operator==(const PgmImage&, const PgmImage&) = default;
};

PgmImage parse_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_pgm(const PgmImage& image);
/// Builds a canonical "P5\n<w> <h>\n<maxval>\n" header around `pixels`.
PgmImage make_pgm(int width, int height, std::vector<std::uint8_t> pixels);
/// Concentric rings and a diagonal bar; handy when no input image is given.
PgmImage test_pattern(int width, int height);

PgmImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const PgmImage& image);

class KeyTooShort : public std::length_error {
 public:
  KeyTooShort(std::size_t required_bits, std::size_t available_bits);
  [[nodiscard]] std::size_t required_bits() const noexcept { return required_; }
  [[nodiscard]] std::size_t available_bits() const noexcept {
    return available_;
  }

 private:
  std::size_t required_;
  std::size_t available_;
};

/// data[i] XOR key byte i, key bits taken most-significant-bit first from the
/// start of `key`. Throws KeyTooShort if key.size() < 8 * data.size().
std::vector<std::uint8_t> xor_bytes(std::span<const std::uint8_t> data,
                                    const BitString& key);

/// Fraction of differing bits between two equal-length byte strings.
double bit_error_fraction(std::span<const std::uint8_t> a,
                          std::span<const std::uint8_t> b);

struct OtpDemo {
  PgmImage ciphertext;
  PgmImage bob_plaintext;
  PgmImage eve_plaintext;
  std::size_t key_bits_used = 0;
  double bob_bit_error_fraction = 0.0;
  double eve_bit_error_fraction = 0.0;
};

OtpDemo demo_pipeline(const PgmImage& image, const SessionResult& session);

}  // namespace blindsim
