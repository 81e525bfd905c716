#include "blindsim/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace blindsim {

namespace {

void require_intensity(double mu, const char* name) {
  if (!(mu >= 0.0)) {
    throw std::domain_error(fmt::format("{} must be >= 0, got {}", name, mu));
  }
}

double log2_of(double x) { return std::log(x) / std::numbers::ln2; }

// 1 - exp(-mu * c) and its complement exp(-mu * c), computed separately so
// neither loses precision near 0 or 1.
double click(double mu, double c) { return -std::expm1(-mu * c); }
double no_click(double mu, double c) { return std::exp(-mu * c); }

double signal_click(Orientation o, double mu_s) {
  return o == Orientation::Diagonal ? click(mu_s, 0.25) : click(mu_s, 0.5);
}

double blind_survival(Orientation o, double mu_b) {
  switch (o) {
    case Orientation::Parallel: return no_click(mu_b, 0.5);
    case Orientation::Diagonal: return no_click(mu_b, 0.25);
    case Orientation::Orthogonal: return 1.0;
  }
  return 1.0;
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(fmt::format("probability {} outside [0, 1]", p));
  }
  double h = 0.0;
  if (p > 0.0) h -= p * log2_of(p);
  if (p < 1.0) h -= (1.0 - p) * log2_of(1.0 - p);
  return h;
}

BlindClickProbs blinding_click_probs(double mu_b_eff) {
  require_intensity(mu_b_eff, "mu_b_eff");
  return {click(mu_b_eff, 0.5), click(mu_b_eff, 0.25), 0.0};
}

MultiClickDistribution multi_click_distribution(double mu_b_eff) {
  require_intensity(mu_b_eff, "mu_b_eff");
  const double pp = click(mu_b_eff, 0.5);
  const double pd = click(mu_b_eff, 0.25);
  const double qp = no_click(mu_b_eff, 0.5);
  const double qd = no_click(mu_b_eff, 0.25);

  MultiClickDistribution m;
  m.p_p = pp * qd * qd;
  m.p_d = pd * qp * qd;
  m.p_pd = pp * pd * qd;
  m.p_dd = pd * pd * qp;
  m.p_pdd = pp * pd * pd;
  m.fired[0] = qp * qd * qd;
  m.fired[1] = m.p_p + 2.0 * m.p_d;
  m.fired[2] = 2.0 * m.p_pd + m.p_dd;
  m.fired[3] = m.p_pdd;
  return m;
}

double signal_detection_prob(Orientation signal, Orientation detector,
                             double mu_b_eff, double mu_s_eff) {
  require_intensity(mu_b_eff, "mu_b_eff");
  require_intensity(mu_s_eff, "mu_s_eff");
  return blind_survival(detector, mu_b_eff) * signal_click(signal, mu_s_eff);
}

InformationResult eve_information(double mu_b_eff, double mu_s_eff) {
  require_intensity(mu_b_eff, "mu_b_eff");
  require_intensity(mu_s_eff, "mu_s_eff");
  if (mu_s_eff == 0.0) {
    throw std::domain_error(
        "Eve's error ratio is undefined for a zero signal intensity");
  }
  using enum Orientation;
  const double pp = signal_detection_prob(Parallel, Parallel, mu_b_eff, mu_s_eff);
  const double dd = signal_detection_prob(Diagonal, Diagonal, mu_b_eff, mu_s_eff);
  const double oo =
      signal_detection_prob(Orthogonal, Orthogonal, mu_b_eff, mu_s_eff);

  InformationResult r;
  r.p_parallel = pp + dd;
  r.p_perp = oo + dd;
  r.pr_eve_wrong = r.p_parallel / (r.p_parallel + r.p_perp);
  r.info_bits = 1.0 - binary_entropy(r.pr_eve_wrong);
  return r;
}

double information_from_qber(double qber) { return 1.0 - binary_entropy(qber); }

std::vector<CurvePoint> analytic_curves(std::span<const double> mu_b_values,
                                        double mu_s_eff) {
  std::vector<CurvePoint> out;
  out.reserve(mu_b_values.size());
  for (double mu : mu_b_values) {
    out.push_back({mu, multi_click_distribution(mu),
                   eve_information(mu, mu_s_eff)});
  }
  return out;
}

}  // namespace blindsim
