#include <cstdio>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "blindsim/io.hpp"
#include "commands.hpp"

namespace {

using namespace blindsim;

void add_session_flags(CLI::App* cmd, cli::SessionOverrides& s) {
  cmd->add_option("--config", s.config, "Session config (JSON)");
  cmd->add_option("--seed", s.seed, "RNG seed (u64)");
  cmd->add_option("--rounds", s.rounds, "Rounds per session");
  cmd->add_option("--mu-s", s.mu_s, "Signal mean photon number at Bob");
  cmd->add_option("--e-pol", s.e_pol, "Polarization error probability");
  cmd->add_option("--background", s.background,
                  "Background click probability per detector and window");
  cmd->add_flag("--gate", s.gate, "Enable the all-detectors-active gate");
  cmd->add_flag("--no-attack", s.no_attack, "Disable Eve's blinding pulses");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dead-time blinding attack on BB84: simulation and analysis"};
  app.require_subcommand(1);

  cli::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sessions over blinding intensities");
  add_session_flags(sweep_cmd, sweep.session);
  sweep_cmd->add_option("--mu-b", sweep.mu_b, "Blinding intensities")
      ->delimiter(',');
  sweep_cmd->add_option("--out", sweep.out, "CSV output (JSON summary alongside)");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Concurrent sessions (0: all cores)");

  cli::CurvesOptions curves;
  auto* curves_cmd = app.add_subcommand("curves", "Closed-form click and information curves");
  curves_cmd->add_option("--min", curves.mu_min, "Smallest blinding intensity");
  curves_cmd->add_option("--max", curves.mu_max, "Largest blinding intensity");
  curves_cmd->add_option("--steps", curves.steps, "Number of rows");
  curves_cmd->add_option("--mu-s", curves.mu_s, "Signal mean photon number");
  curves_cmd->add_option("--out", curves.out, "CSV output (stdout if omitted)");

  cli::CharacterizeOptions charz;
  auto* charz_cmd = app.add_subcommand("characterize", "Two-pulse dead-time scan and fit");
  charz_cmd->add_option("--tau-d", charz.dead_time_s, "True dead time [s]");
  charz_cmd->add_option("--tau-2", charz.jitter_s, "True discrimination jitter [s]");
  charz_cmd->add_option("--tau-3", charz.recharge_s, "True recharge time [s]");
  charz_cmd->add_option("--delays", charz.delay_count, "Number of delays");
  charz_cmd->add_option("--first-delay", charz.first_delay_s, "First delay [s]");
  charz_cmd->add_option("--last-delay", charz.last_delay_s, "Last delay [s]");
  charz_cmd->add_option("--trials", charz.trials, "Trials per delay");
  charz_cmd->add_option("--seed", charz.seed, "RNG seed (u64)");
  charz_cmd->add_flag("--noiseless", charz.noiseless, "Fit the exact curve");
  charz_cmd->add_option("--out", charz.out, "Scan CSV output");

  cli::OtpOptions otp;
  auto* otp_cmd = app.add_subcommand("otp", "One-time-pad demo with simulated keys");
  add_session_flags(otp_cmd, otp.session);
  otp_cmd->add_option("--image", otp.image, "Binary PGM (P5) input");
  otp_cmd->add_option("--mu-b", otp.mu_b, "Blinding intensity");
  otp_cmd->add_option("--out", otp.out_dir, "Output directory");
  otp_cmd->add_option("--pattern-width", otp.pattern_width,
                      "Built-in pattern width when no image is given");
  otp_cmd->add_option("--pattern-height", otp.pattern_height,
                      "Built-in pattern height when no image is given");
  otp_cmd->add_flag("--zero-key", otp.zero_key)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "blindsim: usage error: %s\n", e.what());
    return 2;
  }

  try {
    if (*sweep_cmd) {
      const auto out = cli::cmd_sweep(sweep);
      std::cout << out.csv;
    } else if (*curves_cmd) {
      const auto csv = cli::cmd_curves(curves);
      if (!curves.out) std::cout << csv;
    } else if (*charz_cmd) {
      std::cout << cli::cmd_characterize(charz).report;
    } else if (*otp_cmd) {
      std::cout << cli::cmd_otp(otp).report;
    }
  } catch (const cli::UsageError& e) {
    std::fprintf(stderr, "blindsim: usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "blindsim: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
