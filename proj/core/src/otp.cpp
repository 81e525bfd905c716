#include "blindsim/otp.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

namespace blindsim {

PgmError::PgmError(const std::string& what, std::size_t offset)
    : std::runtime_error(fmt::format("{} (byte offset {})", what, offset)),
      offset_(offset) {}

KeyTooShort::KeyTooShort(std::size_t required_bits, std::size_t available_bits)
    : std::length_error(fmt::format(
          "key too short: {} bits required, {} available", required_bits,
          available_bits)),
      required_(required_bits),
      available_(available_bits) {}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  int read_int(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000) throw PgmError(fmt::format("{} too large", what), start);
      ++pos_;
    }
    if (pos_ == start) {
      throw PgmError(fmt::format("expected {}", what), start);
    }
    return static_cast<int>(value);
  }

  [[nodiscard]] std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

PgmImage parse_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw PgmError("not a binary PGM: missing 'P5' magic", 0);
  }
  HeaderReader in(bytes);
  in.advance(2);
  PgmImage img;
  in.skip_space_and_comments();
  const std::size_t width_at = in.pos();
  img.width = in.read_int("width");
  img.height = in.read_int("height");
  in.skip_space_and_comments();
  const std::size_t maxval_at = in.pos();
  img.maxval = in.read_int("maxval");
  if (img.width <= 0 || img.height <= 0) {
    throw PgmError("image dimensions must be positive", width_at);
  }
  if (img.maxval <= 0 || img.maxval > 255) {
    throw PgmError("only 8-bit PGM (maxval 1..255) is supported", maxval_at);
  }
  if (in.pos() >= bytes.size() || !std::isspace(bytes[in.pos()])) {
    throw PgmError("expected a single whitespace byte after maxval", in.pos());
  }
  in.advance(1);
  const std::size_t header_end = in.pos();
  const auto pixel_count = static_cast<std::size_t>(img.width) *
                           static_cast<std::size_t>(img.height);
  if (bytes.size() - header_end < pixel_count) {
    throw PgmError(fmt::format("truncated pixel data: expected {} bytes, found {}",
                               pixel_count, bytes.size() - header_end),
                   bytes.size());
  }
  img.header.assign(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(header_end));
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header_end),
                    bytes.begin() + static_cast<std::ptrdiff_t>(header_end + pixel_count));
  return img;
}

std::vector<std::uint8_t> serialize_pgm(const PgmImage& image) {
  std::vector<std::uint8_t> out(image.header);
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

PgmImage make_pgm(int width, int height, std::vector<std::uint8_t> pixels) {
  if (width <= 0 || height <= 0 ||
      pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("pixel count does not match image dimensions");
  }
  PgmImage img;
  img.width = width;
  img.height = height;
  img.maxval = 255;
  const auto header = fmt::format("P5\n{} {}\n255\n", width, height);
  img.header.assign(header.begin(), header.end());
  img.pixels = std::move(pixels);
  return img;
}

PgmImage test_pattern(int width, int height) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  const double cx = width / 2.0;
  const double cy = height / 2.0;
  const double scale = std::min(width, height) / 2.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double r = std::hypot(x - cx, y - cy) / scale;
      const bool ring = r < 1.0 && static_cast<int>(r * 6.0) % 2 == 0;
      const bool bar = std::abs((x - cx) - (y - cy)) < scale * 0.12;
      px[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
         static_cast<std::size_t>(x)] = (ring != bar) ? 0 : 255;
    }
  }
  return make_pgm(width, height, std::move(px));
}

PgmImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return parse_pgm(bytes);
  } catch (const PgmError& e) {
    throw PgmError(fmt::format("{}: malformed PGM", path.string()), e.offset());
  }
}

void write_pgm(const std::filesystem::path& path, const PgmImage& image) {
  std::ofstream out(path, std::ios::binary);
  const auto bytes = serialize_pgm(image);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  }
}

std::vector<std::uint8_t> xor_bytes(std::span<const std::uint8_t> data,
                                    const BitString& key) {
  const std::size_t required = data.size() * 8;
  if (key.size() < required) throw KeyTooShort(required, key.size());
  const auto bits = key.bits();
  std::vector<std::uint8_t> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint8_t k = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      k = static_cast<std::uint8_t>((k << 1) | bits[i * 8 + j]);
    }
    out[i] = data[i] ^ k;
  }
  return out;
}

double bit_error_fraction(std::span<const std::uint8_t> a,
                          std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("byte strings differ in length");
  }
  if (a.empty()) return 0.0;
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    flipped += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
  }
  return static_cast<double>(flipped) / (8.0 * static_cast<double>(a.size()));
}

OtpDemo demo_pipeline(const PgmImage& image, const SessionResult& session) {
  const std::size_t required = image.pixels.size() * 8;
  if (session.alice_key.size() < required) {
    throw KeyTooShort(required, session.alice_key.size());
  }
  auto with_pixels = [&](std::vector<std::uint8_t> px) {
    PgmImage out = image;
    out.pixels = std::move(px);
    return out;
  };

  OtpDemo demo;
  demo.key_bits_used = required;
  demo.ciphertext = with_pixels(xor_bytes(image.pixels, session.alice_key));
  demo.bob_plaintext = with_pixels(xor_bytes(demo.ciphertext.pixels, session.bob_key));
  demo.eve_plaintext = with_pixels(xor_bytes(demo.ciphertext.pixels, session.eve_key));
  demo.bob_bit_error_fraction =
      bit_error_fraction(image.pixels, demo.bob_plaintext.pixels);
  demo.eve_bit_error_fraction =
      bit_error_fraction(image.pixels, demo.eve_plaintext.pixels);
  return demo;
}

}  // namespace blindsim
