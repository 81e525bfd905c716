#include "blindsim/io.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace blindsim {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                    std::string_view where) {
  const std::set<std::string_view> allowed(known);
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(fmt::format("unknown field '{}' in {}", key, where));
    }
  }
}

template <class T>
void read_field(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = it->template get<T>();
}

RawIntensity read_raw(const json& obj, std::string_view where) {
  reject_unknown(obj, {"mean_photons", "transmission"}, where);
  RawIntensity raw;
  read_field(obj, "mean_photons", raw.mean_photons);
  read_field(obj, "transmission", raw.transmission);
  return raw;
}

json raw_to_json(const RawIntensity& raw) {
  return json{{"mean_photons", raw.mean_photons},
              {"transmission", raw.transmission}};
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

SessionConfig session_config_from_json(std::string_view text) {
  SessionConfig cfg;
  try {
    const json root = json::parse(text);
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(root,
                   {"timing", "intensity", "dead_time", "rounds", "seed",
                    "attack", "countermeasure"},
                   "config");

    if (auto it = root.find("timing"); it != root.end()) {
      reject_unknown(*it,
                     {"period_s", "window_s", "blinding_offset_s", "dead_time_s"},
                     "timing");
      read_field(*it, "period_s", cfg.timing.period_s);
      read_field(*it, "window_s", cfg.timing.window_s);
      read_field(*it, "blinding_offset_s", cfg.timing.blinding_offset_s);
      read_field(*it, "dead_time_s", cfg.timing.dead_time_s);
    }

    if (auto it = root.find("intensity"); it != root.end()) {
      reject_unknown(*it,
                     {"mu_b_eff", "mu_s_eff", "blinding_raw", "signal_raw",
                      "e_pol", "background", "extinction"},
                     "intensity");
      auto& in = cfg.intensity;
      if (auto raw = it->find("blinding_raw"); raw != it->end()) {
        in.blinding_raw = read_raw(*raw, "blinding_raw");
        in.mu_b_eff = in.blinding_raw->effective();
      }
      if (auto raw = it->find("signal_raw"); raw != it->end()) {
        in.signal_raw = read_raw(*raw, "signal_raw");
        in.mu_s_eff = in.signal_raw->effective();
      }
      read_field(*it, "mu_b_eff", in.mu_b_eff);
      read_field(*it, "mu_s_eff", in.mu_s_eff);
      read_field(*it, "e_pol", in.e_pol);
      read_field(*it, "background", in.background);
      read_field(*it, "extinction", in.extinction);
    }

    cfg.dead_time = DeadTimeModel{};
    cfg.dead_time.dead_time_s = cfg.timing.dead_time_s;
    if (auto it = root.find("dead_time"); it != root.end()) {
      reject_unknown(*it, {"mode", "dead_time_s", "jitter_s", "recharge_s"},
                     "dead_time");
      std::string mode = "binary";
      read_field(*it, "mode", mode);
      if (mode == "graded") {
        cfg.dead_time.mode = DeadTimeModel::Mode::Graded;
      } else if (mode != "binary") {
        throw ConfigError(fmt::format("unknown dead time mode '{}'", mode));
      }
      read_field(*it, "dead_time_s", cfg.dead_time.dead_time_s);
      read_field(*it, "jitter_s", cfg.dead_time.jitter_s);
      read_field(*it, "recharge_s", cfg.dead_time.recharge_s);
    }

    read_field(root, "rounds", cfg.rounds);
    read_field(root, "seed", cfg.seed);
    read_field(root, "attack", cfg.attack);
    read_field(root, "countermeasure", cfg.countermeasure);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("invalid config JSON: {}", e.what()));
  }
  cfg.validate();
  return cfg;
}

SessionConfig load_session_config(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return session_config_from_json(text);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string session_config_to_json(const SessionConfig& cfg) {
  json intensity{{"mu_b_eff", cfg.intensity.mu_b_eff},
                 {"mu_s_eff", cfg.intensity.mu_s_eff}};
  if (cfg.intensity.blinding_raw) {
    intensity["blinding_raw"] = raw_to_json(*cfg.intensity.blinding_raw);
  }
  if (cfg.intensity.signal_raw) {
    intensity["signal_raw"] = raw_to_json(*cfg.intensity.signal_raw);
  }
  intensity["e_pol"] = cfg.intensity.e_pol;
  intensity["background"] = cfg.intensity.background;
  intensity["extinction"] = cfg.intensity.extinction;

  json dead{{"mode", cfg.dead_time.mode == DeadTimeModel::Mode::Graded
                         ? "graded"
                         : "binary"},
            {"dead_time_s", cfg.dead_time.dead_time_s}};
  if (cfg.dead_time.mode == DeadTimeModel::Mode::Graded) {
    dead["jitter_s"] = cfg.dead_time.jitter_s;
    dead["recharge_s"] = cfg.dead_time.recharge_s;
  }

  const json root{
      {"timing",
       {{"period_s", cfg.timing.period_s},
        {"window_s", cfg.timing.window_s},
        {"blinding_offset_s", cfg.timing.blinding_offset_s},
        {"dead_time_s", cfg.timing.dead_time_s}}},
      {"intensity", intensity},
      {"dead_time", dead},
      {"rounds", cfg.rounds},
      {"seed", cfg.seed},
      {"attack", cfg.attack},
      {"countermeasure", cfg.countermeasure}};
  return root.dump(2) + "\n";
}

std::string session_result_to_json(const SessionResult& r,
                                   const std::optional<KeyFileNames>& key_files) {
  json hist = json::array();
  json hist_se = json::array();
  json counts = json::array();
  for (std::size_t k = 0; k < r.blinding_histogram.size(); ++k) {
    hist.push_back(r.blinding_histogram[k].value);
    hist_se.push_back(r.blinding_histogram[k].std_error);
    counts.push_back(r.blinding_counts[k]);
  }
  auto value = [](const std::optional<Estimate>& e) {
    return e ? std::optional<double>(e->value) : std::nullopt;
  };
  auto error = [](const std::optional<Estimate>& e) {
    return e ? std::optional<double>(e->std_error) : std::nullopt;
  };

  json root{{"gated", r.gated},
            {"rounds", r.rounds},
            {"detections", r.detections},
            {"sifted_bits", r.sifted_bits()},
            {"alice_key_bits", r.alice_key.size()},
            {"bob_key_bits", r.bob_key.size()},
            {"eve_key_bits", r.eve_key.size()},
            {"qber_ab", optional_number(value(r.qber_ab))},
            {"qber_ab_se", optional_number(error(r.qber_ab))},
            {"qber_be", optional_number(value(r.qber_be))},
            {"qber_be_se", optional_number(error(r.qber_be))},
            {"i_eb", optional_number(r.i_eb)},
            {"overlap", optional_number(r.overlap)},
            {"blinding_counts", counts},
            {"blinding_histogram", hist},
            {"blinding_histogram_se", hist_se},
            {"gate_passed", r.gate_passed},
            {"gate_kept_fraction", r.gate_kept_fraction.value},
            {"gate_kept_fraction_se", r.gate_kept_fraction.std_error}};
  if (r.gated) root["kept_fraction"] = r.gate_kept_fraction.value;
  if (key_files) {
    root["key_files"] = json{{"alice", key_files->alice},
                             {"bob", key_files->bob},
                             {"eve", key_files->eve},
                             {"bit_order", "msb_first"}};
  }
  return root.dump(2) + "\n";
}

std::vector<std::uint8_t> pack_bits(const BitString& bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  const auto b = bits.bits();
  for (std::size_t i = 0; i < b.size(); ++i) {
    out[i / 8] = static_cast<std::uint8_t>(out[i / 8] | (b[i] << (7 - i % 8)));
  }
  return out;
}

BitString unpack_bits(std::span<const std::uint8_t> bytes,
                      std::size_t bit_count) {
  if (bytes.size() != (bit_count + 7) / 8) {
    throw std::invalid_argument(fmt::format(
        "{} bytes cannot hold exactly {} packed bits", bytes.size(), bit_count));
  }
  std::vector<std::uint8_t> bits(bit_count);
  for (std::size_t i = 0; i < bit_count; ++i) {
    bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1U;
  }
  if (bit_count % 8 != 0) {
    const auto pad_mask = static_cast<std::uint8_t>(0xFFU >> (bit_count % 8));
    if ((bytes.back() & pad_mask) != 0) {
      throw std::invalid_argument("non-zero padding bits in final byte");
    }
  }
  return BitString(std::move(bits));
}

void write_key_file(const std::filesystem::path& path, const BitString& bits) {
  const auto bytes = pack_bits(bits);
  write_text_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                         bytes.size()));
}

BitString read_key_file(const std::filesystem::path& path,
                        std::size_t bit_count) {
  const auto text = read_text_file(path);
  const std::span<const std::uint8_t> bytes(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
  return unpack_bits(bytes, bit_count);
}

void write_text_file(const std::filesystem::path& path,
                     std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string format_sig6(double value) {
  // fmt's 'g' formatting is locale-independent unless 'L' is requested.
  return fmt::format("{:.6g}", value);
}

std::string format_sig6(const std::optional<double>& value) {
  return value ? format_sig6(*value) : std::string();
}

std::string curves_csv(std::span<const CurvePoint> points) {
  std::string out = "mu_b_eff,p0,p1,p2,p3,pr_eve_wrong,info_bits\n";
  for (const auto& p : points) {
    out += fmt::format("{},{},{},{},{},{},{}\n", format_sig6(p.mu_b_eff),
                       format_sig6(p.clicks.fired[0]),
                       format_sig6(p.clicks.fired[1]),
                       format_sig6(p.clicks.fired[2]),
                       format_sig6(p.clicks.fired[3]),
                       format_sig6(p.info.pr_eve_wrong),
                       format_sig6(p.info.info_bits));
  }
  return out;
}

std::string scan_csv(std::span<const EfficiencySample> samples) {
  std::string out = "delay_s,efficiency\n";
  for (const auto& s : samples) {
    out += fmt::format("{},{}\n", format_sig6(s.delay_s),
                       format_sig6(s.efficiency));
  }
  return out;
}

}  // namespace blindsim
