#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "blindsim/io.hpp"
#include "blindsim/rng.hpp"
#include "test_support.hpp"

namespace blindsim {
namespace {

using json = nlohmann::json;

TEST(ConfigJson, EmptyObjectGivesDefaults) {
  const auto c = session_config_from_json("{}");
  EXPECT_DOUBLE_EQ(c.timing.period_s, 4e-6);
  EXPECT_DOUBLE_EQ(c.timing.window_s, 5e-9);
  EXPECT_DOUBLE_EQ(c.timing.blinding_offset_s, 200e-9);
  EXPECT_DOUBLE_EQ(c.timing.dead_time_s, 2e-6);
  EXPECT_EQ(c.dead_time, DeadTimeModel::binary(2e-6));
  EXPECT_DOUBLE_EQ(c.intensity.e_pol, 0.011);
  EXPECT_TRUE(c.attack);
  EXPECT_FALSE(c.countermeasure);
}

TEST(ConfigJson, RoundTrip) {
  SessionConfig c;
  c.intensity = IntensityConfig::from_raw({33.04, 0.5}, {0.5, 0.2});
  c.intensity.e_pol = 0.02;
  c.intensity.background = 1e-4;
  c.dead_time = DeadTimeModel::graded(1.5e-6, 30e-9, 100e-9);
  c.rounds = 1234;
  c.seed = 18'446'744'073'709'551'615ULL;
  c.attack = false;
  c.countermeasure = true;
  const auto text = session_config_to_json(c);
  const auto back = session_config_from_json(text);
  EXPECT_EQ(back.intensity.mu_b_eff, c.intensity.mu_b_eff);
  EXPECT_EQ(back.intensity.mu_s_eff, c.intensity.mu_s_eff);
  EXPECT_EQ(back.intensity.e_pol, 0.02);
  EXPECT_EQ(back.intensity.background, 1e-4);
  EXPECT_EQ(back.dead_time, c.dead_time);
  EXPECT_EQ(back.rounds, 1234U);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_FALSE(back.attack);
  EXPECT_TRUE(back.countermeasure);
  EXPECT_EQ(session_config_to_json(back), text);
}

TEST(ConfigJson, RawIntensitiesDeriveEffectiveValues) {
  const auto c = session_config_from_json(
      R"({"intensity": {"blinding_raw": {"mean_photons": 20, "transmission": 0.25}}})");
  EXPECT_DOUBLE_EQ(c.intensity.mu_b_eff, 5.0);
  EXPECT_THROW(session_config_from_json(R"({"intensity": {"mu_b_eff": 4,
      "blinding_raw": {"mean_photons": 20, "transmission": 0.25}}})"),
               ConfigError);
}

TEST(ConfigJson, TimingDeadTimeFeedsTheDefaultModel) {
  const auto c = session_config_from_json(R"({"timing": {"dead_time_s": 1e-6}})");
  EXPECT_EQ(c.dead_time, DeadTimeModel::binary(1e-6));
}

TEST(ConfigJson, Rejections) {
  EXPECT_THROW(session_config_from_json(R"({"seeed": 1})"), ConfigError);
  EXPECT_THROW(session_config_from_json(R"({"intensity": {"mu": 1}})"), ConfigError);
  EXPECT_THROW(session_config_from_json(R"({"dead_time": {"mode": "smooth"}})"), ConfigError);
  EXPECT_THROW(session_config_from_json(R"({"rounds": "many"})"), ConfigError);
  EXPECT_THROW(session_config_from_json("[1, 2]"), ConfigError);
  EXPECT_THROW(session_config_from_json("{"), ConfigError);
  EXPECT_THROW(session_config_from_json(R"({"timing": {"blinding_offset_s": 1e-9}})"),
               ConfigError);
  EXPECT_THROW(session_config_from_json(R"({"intensity": {"e_pol": 0.7}})"), ConfigError);
}

TEST(ConfigJson, LoadReportsThePath) {
  const auto dir = test_support::scratch_dir("config");
  write_text_file(dir / "bad.json", R"({"nope": true})");
  try {
    (void)load_session_config(dir / "bad.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
  }
  EXPECT_THROW(load_session_config(dir / "absent.json"), IoError);
}

TEST(ResultJson, EmptySessionUsesNulls) {
  SessionResult r;
  r.rounds = 10;
  r.blinding_counts[0] = 10;
  r.blinding_histogram[0] = {1.0, 0.0};
  const auto j = json::parse(session_result_to_json(r));
  EXPECT_TRUE(j["qber_ab"].is_null());
  EXPECT_TRUE(j["qber_be"].is_null());
  EXPECT_TRUE(j["i_eb"].is_null());
  EXPECT_TRUE(j["overlap"].is_null());
  EXPECT_EQ(j["sifted_bits"], 0);
  EXPECT_EQ(j["blinding_histogram"].size(), 5U);
  EXPECT_FALSE(j.contains("kept_fraction"));
  EXPECT_FALSE(j.contains("key_files"));
}

TEST(ResultJson, GatedResultsCarryKeptFraction) {
  SessionConfig c;
  c.intensity.mu_b_eff = 0.37;
  c.rounds = 50'000;
  c.countermeasure = true;
  const auto pair = run_session_pair(c);
  const auto j = json::parse(session_result_to_json(pair.gated, KeyFileNames{"a", "b", "e"}));
  EXPECT_TRUE(j["gated"].get<bool>());
  EXPECT_DOUBLE_EQ(j["kept_fraction"].get<double>(), pair.gated.gate_kept_fraction.value);
  EXPECT_EQ(j["key_files"]["bit_order"], "msb_first");
  EXPECT_EQ(j["sifted_bits"].get<std::size_t>(), pair.gated.sifted_bits());
  EXPECT_DOUBLE_EQ(j["qber_be"].get<double>(), pair.gated.qber_be->value);
}

TEST(PackedKeys, MostSignificantBitFirst) {
  EXPECT_EQ(pack_bits(BitString::from_string("101")), (std::vector<std::uint8_t>{0xA0}));
  EXPECT_EQ(pack_bits(BitString::from_string("000000011")),
            (std::vector<std::uint8_t>{0x01, 0x80}));
  EXPECT_TRUE(pack_bits(BitString()).empty());
}

TEST(PackedKeys, RoundTripAnyLength) {
  RandomStream rng(5, 0);
  for (std::size_t n = 0; n < 70; ++n) {
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
    const BitString key(bits);
    const auto packed = pack_bits(key);
    EXPECT_EQ(packed.size(), (n + 7) / 8);
    EXPECT_EQ(unpack_bits(packed, n), key) << n;
  }
}

TEST(PackedKeys, RejectsBadPaddingAndLength) {
  const std::vector<std::uint8_t> padded{0xA1};
  EXPECT_THROW(unpack_bits(padded, 3), std::invalid_argument);
  EXPECT_THROW(unpack_bits(padded, 9), std::invalid_argument);
  EXPECT_NO_THROW(unpack_bits(padded, 8));
}

TEST(PackedKeys, FileRoundTrip) {
  const auto dir = test_support::scratch_dir("keys");
  const auto key = BitString::from_string("1101001110");
  write_key_file(dir / "k.key", key);
  EXPECT_EQ(test_support::read_bytes(dir / "k.key"), (std::vector<std::uint8_t>{0xD3, 0x80}));
  EXPECT_EQ(read_key_file(dir / "k.key", 10), key);
}

TEST(TextFiles, ErrorsNameThePath) {
  try {
    write_text_file("/nonexistent-dir/x.csv", "a");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
}

TEST(Csv, SixSignificantDigits) {
  EXPECT_EQ(format_sig6(0.0), "0");
  EXPECT_EQ(format_sig6(16.52), "16.52");
  EXPECT_EQ(format_sig6(0.0117), "0.0117");
  EXPECT_EQ(format_sig6(1.0 / 3.0), "0.333333");
  EXPECT_EQ(format_sig6(1.2614947859962485e-05), "1.26149e-05");
  EXPECT_EQ(format_sig6(123456789.0), "1.23457e+08");
  EXPECT_EQ(format_sig6(std::optional<double>()), "");
}

TEST(Csv, ScanHeaderAndRows) {
  const std::vector<EfficiencySample> s{{4e-7, 0.490842}, {3.5e-6, 1.0}};
  EXPECT_EQ(scan_csv(s), "delay_s,efficiency\n4e-07,0.490842\n3.5e-06,1\n");
}

TEST(Csv, CurvesMatchGoldenFile) {
  std::vector<double> mus;
  for (int k = 0; k <= 20; ++k) mus.push_back(k);
  const auto csv = curves_csv(analytic_curves(mus, 0.1));
  EXPECT_EQ(csv, read_text_file(BLINDSIM_TEST_DATA_DIR "/curves_0_20_21.csv"));
}

}  // namespace
}  // namespace blindsim
