#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "blindsim/analytic.hpp"
#include "blindsim/io.hpp"

namespace blindsim::cli {

using json = nlohmann::ordered_json;

SessionConfig resolve_config(const SessionOverrides& o) {
  SessionConfig cfg =
      o.config ? load_session_config(*o.config) : SessionConfig{};
  if (o.seed) cfg.seed = *o.seed;
  if (o.rounds) cfg.rounds = *o.rounds;
  if (o.mu_s) {
    cfg.intensity.mu_s_eff = *o.mu_s;
    cfg.intensity.signal_raw.reset();
  }
  if (o.e_pol) cfg.intensity.e_pol = *o.e_pol;
  if (o.background) cfg.intensity.background = *o.background;
  if (o.gate) cfg.countermeasure = true;
  if (o.no_attack) cfg.attack = false;
  cfg.validate();
  return cfg;
}

namespace {

SessionConfig at_intensity(SessionConfig cfg, double mu_b) {
  cfg.intensity.mu_b_eff = mu_b;
  cfg.intensity.blinding_raw.reset();
  cfg.validate();
  return cfg;
}

std::string sweep_row(double mu_b, const SessionResult& r,
                      double gate_kept_fraction) {
  auto val = [](const std::optional<Estimate>& e) {
    return e ? std::optional<double>(e->value) : std::nullopt;
  };
  auto se = [](const std::optional<Estimate>& e) {
    return e ? std::optional<double>(e->std_error) : std::nullopt;
  };
  return fmt::format(
      "{},{},{},{},{},{},{},{},{},{},{},{}\n", format_sig6(mu_b),
      format_sig6(val(r.qber_ab)), format_sig6(se(r.qber_ab)),
      format_sig6(val(r.qber_be)), format_sig6(se(r.qber_be)),
      format_sig6(r.i_eb), format_sig6(r.overlap),
      format_sig6(r.blinding_histogram[0].value),
      format_sig6(r.blinding_histogram[1].value),
      format_sig6(r.blinding_histogram[2].value),
      format_sig6(r.blinding_histogram[3].value),
      format_sig6(gate_kept_fraction));
}

std::filesystem::path sibling_json(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

}  // namespace

SweepOutput run_sweep(const SweepOptions& options) {
  if (options.mu_b.empty()) {
    throw UsageError("blinding intensity list is empty");
  }
  const SessionConfig base = resolve_config(options.session);

  std::vector<double> mus = options.mu_b;
  std::sort(mus.begin(), mus.end());
  std::vector<SessionConfig> configs;
  configs.reserve(mus.size());
  for (double mu : mus) {
    if (!(mu >= 0.0)) {
      throw UsageError(fmt::format("blinding intensity {} is negative", mu));
    }
    configs.push_back(at_intensity(base, mu));
  }

  // Points are independent sessions; results land in mu order regardless of
  // completion order.
  const unsigned jobs = std::max(
      1U, options.jobs ? options.jobs : std::thread::hardware_concurrency());
  std::vector<SweepPoint> points(mus.size());
  for (std::size_t start = 0; start < mus.size(); start += jobs) {
    std::vector<std::future<SessionPair>> batch;
    const std::size_t end = std::min(mus.size(), start + jobs);
    for (std::size_t k = start; k < end; ++k) {
      batch.push_back(std::async(std::launch::async, [&configs, k] {
        return run_session_pair(configs[k]);
      }));
    }
    for (std::size_t k = start; k < end; ++k) {
      points[k] = {mus[k], batch[k - start].get()};
    }
  }

  SweepOutput out;
  out.csv =
      "mu_b_eff,qber_ab,qber_ab_se,qber_be,qber_be_se,i_eb,overlap,p0_emp,"
      "p1_emp,p2_emp,p3_emp,gate_kept_fraction\n";
  json summary{{"config", json::parse(session_config_to_json(base))},
               {"report_gated", options.session.gate},
               {"points", json::array()}};
  for (const auto& p : points) {
    const auto& shown = options.session.gate ? p.sessions.gated
                                             : p.sessions.ungated;
    out.csv += sweep_row(p.mu_b_eff, shown,
                         p.sessions.ungated.gate_kept_fraction.value);
    summary["points"].push_back(
        {{"mu_b_eff", p.mu_b_eff},
         {"ungated", json::parse(session_result_to_json(p.sessions.ungated))},
         {"gated", json::parse(session_result_to_json(p.sessions.gated))}});
  }
  out.json = summary.dump(2) + "\n";
  out.points = std::move(points);
  return out;
}

SweepOutput cmd_sweep(const SweepOptions& options) {
  auto out = run_sweep(options);
  write_text_file(options.out, out.csv);
  write_text_file(sibling_json(options.out), out.json);
  return out;
}

std::string run_curves(const CurvesOptions& o) {
  if (!(o.mu_min >= 0.0) || !(o.mu_max >= o.mu_min) || !std::isfinite(o.mu_max)) {
    throw UsageError(fmt::format("invalid intensity range [{}, {}]", o.mu_min,
                                 o.mu_max));
  }
  if (o.steps < 1) throw UsageError("steps must be >= 1");
  if (!(o.mu_s > 0.0)) throw UsageError("signal intensity must be > 0");
  std::vector<double> mus(o.steps, o.mu_min);
  if (o.steps > 1) {
    const double step = (o.mu_max - o.mu_min) / static_cast<double>(o.steps - 1);
    for (std::size_t k = 0; k < o.steps; ++k) {
      mus[k] = o.mu_min + step * static_cast<double>(k);
    }
    mus.back() = o.mu_max;
  }
  return curves_csv(analytic_curves(mus, o.mu_s));
}

std::string cmd_curves(const CurvesOptions& options) {
  auto csv = run_curves(options);
  if (options.out) write_text_file(*options.out, csv);
  return csv;
}

CharacterizeOutput cmd_characterize(const CharacterizeOptions& o) {
  if (o.delay_count < 4) {
    throw UsageError(fmt::format(
        "at least 4 delays are needed to fit three parameters, got {}",
        o.delay_count));
  }
  if (o.trials < 1) throw UsageError("trials must be >= 1");
  if (!(o.first_delay_s >= 0.0) || !(o.last_delay_s > o.first_delay_s)) {
    throw UsageError("delay range must satisfy 0 <= first < last");
  }

  CharacterizeOutput out;
  out.truth = DeadTimeModel::graded(o.dead_time_s, o.jitter_s, o.recharge_s);
  const auto delays = linear_delays(o.first_delay_s, o.last_delay_s, o.delay_count);
  if (o.noiseless) {
    for (double d : delays) {
      out.samples.push_back({d, relative_efficiency(out.truth, d)});
    }
  } else {
    out.samples = simulate_two_pulse_scan(out.truth, delays, o.trials, o.seed);
  }
  out.fit = fit_recovery_curve(out.samples);

  auto line = [](const char* name, double truth, double fitted) {
    return fmt::format("{:<8} true {:>12.6g} s   fitted {:>12.6g} s   ({:+.3f}%)\n",
                       name, truth, fitted, 100.0 * (fitted - truth) / truth);
  };
  out.report = fmt::format("two-pulse scan: {} delays, {}\n", delays.size(),
                           o.noiseless ? std::string("noiseless")
                                       : fmt::format("{} trials/delay, seed {}",
                                                     o.trials, o.seed));
  out.report += line("tau_d", o.dead_time_s, out.fit.dead_time_s);
  out.report += line("tau_2", o.jitter_s, out.fit.jitter_s);
  out.report += line("tau_3", o.recharge_s, out.fit.recharge_s);
  out.report += fmt::format("residual {:.6g} (sum of squares), {} sweeps\n",
                            out.fit.residual, out.fit.iterations);
  if (o.out) write_text_file(*o.out, scan_csv(out.samples));
  return out;
}

namespace {

constexpr std::uint64_t kPilotRounds = 20'000;

std::uint64_t rounds_for_key(const SessionConfig& cfg, std::size_t bits) {
  SessionConfig pilot = cfg;
  pilot.rounds = kPilotRounds;
  const auto r = cfg.countermeasure ? run_session_pair(pilot).gated
                                    : run_session(pilot);
  if (r.sifted_bits() == 0) {
    throw KeyTooShort(bits, 0);
  }
  const double rate =
      static_cast<double>(r.sifted_bits()) / static_cast<double>(kPilotRounds);
  return static_cast<std::uint64_t>(std::ceil(3.0 * static_cast<double>(bits) / rate));
}

}  // namespace

OtpOutput cmd_otp(const OtpOptions& o) {
  const PgmImage image = o.image ? read_pgm(*o.image)
                                 : test_pattern(o.pattern_width, o.pattern_height);
  const std::size_t required = image.pixels.size() * 8;

  OtpOutput out;
  out.config = resolve_config(o.session);
  if (o.mu_b) out.config = at_intensity(out.config, *o.mu_b);
  if (!o.session.rounds) out.config.rounds = rounds_for_key(out.config, required);

  out.session = out.config.countermeasure ? run_session_pair(out.config).gated
                                          : run_session(out.config);
  if (o.zero_key) {
    const BitString zeros(std::vector<std::uint8_t>(out.session.sifted_bits(), 0));
    out.session.alice_key = zeros;
    out.session.bob_key = zeros;
    out.session.eve_key = zeros;
  }
  out.demo = demo_pipeline(image, out.session);

  std::filesystem::create_directories(o.out_dir);
  write_pgm(o.out_dir / "ciphertext.pgm", out.demo.ciphertext);
  write_pgm(o.out_dir / "bob.pgm", out.demo.bob_plaintext);
  write_pgm(o.out_dir / "eve.pgm", out.demo.eve_plaintext);
  const KeyFileNames keys{"alice.key", "bob.key", "eve.key"};
  write_key_file(o.out_dir / keys.alice, out.session.alice_key);
  write_key_file(o.out_dir / keys.bob, out.session.bob_key);
  write_key_file(o.out_dir / keys.eve, out.session.eve_key);
  write_text_file(o.out_dir / "session.json",
                  session_result_to_json(out.session, keys));

  auto opt = [](const std::optional<Estimate>& e) {
    return e ? json(e->value) : json(nullptr);
  };
  const json report{
      {"mu_b_eff", out.config.intensity.mu_b_eff},
      {"mu_s_eff", out.config.intensity.mu_s_eff},
      {"rounds", out.config.rounds},
      {"seed", out.config.seed},
      {"gated", out.session.gated},
      {"width", image.width},
      {"height", image.height},
      {"key_bits_used", out.demo.key_bits_used},
      {"sifted_bits", out.session.sifted_bits()},
      {"qber_ab", opt(out.session.qber_ab)},
      {"qber_be", opt(out.session.qber_be)},
      {"bob_bit_error_fraction", out.demo.bob_bit_error_fraction},
      {"eve_bit_error_fraction", out.demo.eve_bit_error_fraction}};
  out.report = report.dump(2) + "\n";
  write_text_file(o.out_dir / "report.json", out.report);
  return out;
}

}  // namespace blindsim::cli
