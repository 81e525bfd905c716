#include "blindsim/spad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "blindsim/rng.hpp"

namespace blindsim {

DeadTimeModel DeadTimeModel::binary(double dead_time_s) {
  DeadTimeModel m;
  m.mode = Mode::Binary;
  m.dead_time_s = dead_time_s;
  m.validate();
  return m;
}

DeadTimeModel DeadTimeModel::graded(double dead_time_s, double jitter_s,
                                    double recharge_s) {
  DeadTimeModel m;
  m.mode = Mode::Graded;
  m.dead_time_s = dead_time_s;
  m.jitter_s = jitter_s;
  m.recharge_s = recharge_s;
  m.validate();
  return m;
}

void DeadTimeModel::validate() const {
  if (!(dead_time_s > 0.0) || !std::isfinite(dead_time_s)) {
    throw ConfigError("dead time must be a positive finite value");
  }
  if (mode == Mode::Graded &&
      (!(jitter_s > 0.0) || !(recharge_s > 0.0) || !std::isfinite(jitter_s) ||
       !std::isfinite(recharge_s))) {
    throw ConfigError("graded recovery needs positive tau_2 and tau_3");
  }
}

DeadTimeModel default_graded_model() {
  return DeadTimeModel::graded(400e-9, 30e-9, 100e-9);
}

double relative_efficiency(const DeadTimeModel& model, double t_prime) {
  if (!(t_prime >= 0.0)) {
    throw std::domain_error(
        fmt::format("time since last click must be >= 0, got {}", t_prime));
  }
  if (model.mode == DeadTimeModel::Mode::Binary) {
    return t_prime < model.dead_time_s ? 0.0 : 1.0;
  }
  if (std::isinf(t_prime)) return 1.0;
  const double gate =
      0.5 * (1.0 + std::erf((t_prime - model.dead_time_s) / model.jitter_s));
  return gate * -std::expm1(-t_prime / model.recharge_s);
}

bool DetectorState::is_active(double t, double draw) const {
  if (!last_click_) return true;
  if (t < *last_click_) {
    throw std::domain_error(fmt::format(
        "query time {} precedes last click at {}", t, *last_click_));
  }
  const double elapsed = t - *last_click_;
  if (model_.mode == DeadTimeModel::Mode::Binary) {
    return elapsed >= model_.dead_time_s;
  }
  return draw < relative_efficiency(model_, elapsed);
}

void DetectorState::register_click(double t) {
  if (last_click_ && t < *last_click_) {
    throw std::domain_error(fmt::format(
        "click at {} precedes previous click at {}", t, *last_click_));
  }
  last_click_ = t;
}

namespace {

double scan_fraction(const DeadTimeModel& model, double delay,
                     std::uint64_t trials, std::uint64_t seed,
                     std::uint64_t stream) {
  RandomStream rng(seed, stream);
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    DetectorState det(Polarization::H, model);
    det.register_click(0.0);
    if (det.is_active(delay, rng.uniform())) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace

std::vector<EfficiencySample> simulate_two_pulse_scan(
    const DeadTimeModel& model, std::span<const double> delays,
    std::uint64_t trials_per_delay, std::uint64_t seed,
    std::optional<double> reference_delay_s) {
  model.validate();
  if (delays.empty()) throw std::invalid_argument("delay list is empty");
  if (trials_per_delay == 0) {
    throw std::invalid_argument("trials per delay must be >= 1");
  }
  for (double d : delays) {
    if (!(d >= 0.0)) {
      throw std::invalid_argument(fmt::format("negative delay {}", d));
    }
  }

  double norm = 1.0;
  if (reference_delay_s) {
    const double ref = scan_fraction(model, *reference_delay_s,
                                     trials_per_delay, seed, delays.size());
    if (ref > 0.0) norm = ref;
  }

  std::vector<EfficiencySample> out;
  out.reserve(delays.size());
  for (std::size_t k = 0; k < delays.size(); ++k) {
    const double f =
        scan_fraction(model, delays[k], trials_per_delay, seed, k);
    out.push_back({delays[k], f / norm});
  }
  return out;
}

std::vector<double> linear_delays(double first, double last, std::size_t n) {
  std::vector<double> out;
  if (n == 0) return out;
  if (n == 1) return {first};
  out.reserve(n);
  const double step = (last - first) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(first + step * static_cast<double>(k));
  }
  return out;
}

namespace {

constexpr int kGridPoints = 24;
constexpr int kMaxSweeps = 200;
constexpr int kResetEvery = 12;
constexpr std::size_t kStarts = 8;
constexpr double kRelativeTolerance = 1e-6;
constexpr double kInvPhi = 0.6180339887498949;

double sum_squares(std::span<const EfficiencySample> samples,
                   const std::array<double, 3>& log_params) {
  DeadTimeModel m;
  m.mode = DeadTimeModel::Mode::Graded;
  m.dead_time_s = std::exp(log_params[0]);
  m.jitter_s = std::exp(log_params[1]);
  m.recharge_s = std::exp(log_params[2]);
  double sse = 0.0;
  for (const auto& s : samples) {
    const double r = relative_efficiency(m, s.delay_s) - s.efficiency;
    sse += r * r;
  }
  return sse;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  }
  return out;
}

// Golden-section search along `dir` over x + s * dir, s in [-half, half].
void line_search(std::span<const EfficiencySample> samples,
                 std::array<double, 3>& x, const std::array<double, 3>& dir,
                 double half, double& best) {
  auto at = [&](double s) {
    auto trial = x;
    for (std::size_t i = 0; i < 3; ++i) trial[i] += s * dir[i];
    return trial;
  };
  auto f = [&](double s) { return sum_squares(samples, at(s)); };
  double a = -half;
  double b = half;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double s = 0.5 * (a + b);
  const double fs = f(s);
  if (fs < best) {
    best = fs;
    x = at(s);
  }
}

// Coordinate descent from x with Powell's direction update: after each sweep
// the direction that gained most is replaced by the sweep's net displacement.
// Directions reset to the axes every kResetEvery sweeps. Returns the number
// of sweeps.
int descend(std::span<const EfficiencySample> samples, std::array<double, 3>& x,
            double& best, double half) {
  using Vec = std::array<double, 3>;
  auto axes = [] {
    return std::array<Vec, 3>{Vec{1.0, 0.0, 0.0}, Vec{0.0, 1.0, 0.0}, Vec{0.0, 0.0, 1.0}};
  };
  auto dirs = axes();
  int sweep = 0;
  while (sweep < kMaxSweeps) {
    ++sweep;
    if (sweep % kResetEvery == 0) dirs = axes();
    const Vec before = x;
    const double f_before = best;
    std::size_t biggest = 0;
    double biggest_gain = -1.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double f0 = best;
      line_search(samples, x, dirs[k], half, best);
      if (f0 - best > biggest_gain) {
        biggest_gain = f0 - best;
        biggest = k;
      }
    }
    Vec pattern{};
    double norm = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      pattern[i] = x[i] - before[i];
      norm += pattern[i] * pattern[i];
    }
    norm = std::sqrt(norm);
    if (norm > 0.0 && best < f_before) {
      for (auto& v : pattern) v /= norm;
      line_search(samples, x, pattern, std::max(half, 4.0 * norm), best);
      dirs[biggest] = dirs[2];
      dirs[2] = pattern;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      change = std::max(change, std::abs(std::expm1(x[i] - before[i])));
    }
    if (change < kRelativeTolerance) break;
  }
  return sweep;
}

}  // namespace

RecoveryFit fit_recovery_curve(std::span<const EfficiencySample> samples) {
  if (samples.size() < 4) {
    throw FitError(fmt::format(
        "need at least 4 samples to fit three parameters, got {}",
        samples.size()));
  }
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = 0.0;
  bool below = false;
  bool above = false;
  for (const auto& s : samples) {
    if (!(s.delay_s >= 0.0) || !std::isfinite(s.efficiency)) {
      throw FitError("samples must have non-negative delays and finite values");
    }
    if (s.delay_s > 0.0) t_min = std::min(t_min, s.delay_s);
    t_max = std::max(t_max, s.delay_s);
    below = below || s.efficiency < 0.5;
    above = above || s.efficiency > 0.5;
  }
  if (!(t_max > 0.0) || t_min >= t_max) {
    throw FitError("degenerate samples: all delays are equal");
  }
  if (!below || !above) {
    throw FitError(
        "samples must span delays both below and above the efficiency "
        "midpoint");
  }

  const double span = t_max;
  const auto dead_grid = log_grid(std::max(t_min, span * 1e-3), t_max,
                                  kGridPoints);
  const auto shape_grid = log_grid(span * 1e-4, span, kGridPoints);

  struct Candidate {
    double sse;
    std::array<double, 3> x;
  };
  std::vector<Candidate> grid;
  grid.reserve(dead_grid.size() * shape_grid.size() * shape_grid.size());
  for (double d : dead_grid) {
    for (double j : shape_grid) {
      for (double r : shape_grid) {
        const std::array<double, 3> trial{d, j, r};
        grid.push_back({sum_squares(samples, trial), trial});
      }
    }
  }
  const auto starts = std::min<std::size_t>(kStarts, grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(starts),
                    grid.end(), [](const Candidate& a, const Candidate& b) {
                      return a.sse < b.sse;
                    });

  const double half = std::max(dead_grid[1] - dead_grid[0],
                               shape_grid[1] - shape_grid[0]);
  std::array<double, 3> x{};
  double best = std::numeric_limits<double>::infinity();
  int sweeps = 0;
  for (std::size_t k = 0; k < starts; ++k) {
    auto xk = grid[k].x;
    double fk = grid[k].sse;
    const int n = descend(samples, xk, fk, half);
    if (fk < best) {
      best = fk;
      x = xk;
      sweeps = n;
    }
  }

  RecoveryFit fit;
  fit.dead_time_s = std::exp(x[0]);
  fit.jitter_s = std::exp(x[1]);
  fit.recharge_s = std::exp(x[2]);
  fit.residual = best;
  fit.iterations = sweeps;
  return fit;
}

}  // namespace blindsim
