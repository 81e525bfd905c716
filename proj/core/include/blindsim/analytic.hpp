// Closed-form detection probabilities for a passive four-detector receiver
// under blinding pulses, and the eavesdropper's information derived from
// them. Orientations (parallel, diagonal, orthogonal) are taken relative to
// the blinding pulse polarization.
#pragma once

#include <array>
#include <span>
#include <vector>

namespace blindsim {

enum class Orientation : unsigned char { Parallel, Diagonal, Orthogonal };

/// Per-detector probability of registering a blinding pulse.
struct BlindClickProbs {
  double parallel = 0.0;
  double diagonal = 0.0;
  double orthogonal = 0.0;
};

struct MultiClickDistribution {
  /// Probability that 0, 1, 2 or 3 detectors fire on one blinding pulse.
  std::array<double, 4> fired{};
  // Single patterns: parallel only, one diagonal only, parallel + one
  // diagonal, both diagonals, parallel + both diagonals.
  double p_p = 0.0;
  double p_d = 0.0;
  double p_pd = 0.0;
  double p_dd = 0.0;
  double p_pdd = 0.0;
};

struct InformationResult {
  double p_parallel = 0.0;
  double p_perp = 0.0;
  /// p_parallel / (p_parallel + p_perp): Eve's error rate on sifted bits.
  double pr_eve_wrong = 0.5;
  double info_bits = 0.0;
};

/// H2(p) in bits with 0 log 0 := 0. Throws std::domain_error outside [0, 1].
double binary_entropy(double p);

/// Poissonian click probabilities 1 - exp(-mu/2), 1 - exp(-mu/4), 0.
BlindClickProbs blinding_click_probs(double mu_b_eff);

MultiClickDistribution multi_click_distribution(double mu_b_eff);

/// Probability that a detector at orientation `detector` registers a signal
/// pulse at orientation `signal`:
///   (1 - P_detector(mu_b)) * P^S_signal(mu_s)
/// with P^S_p = P^S_o = 1 - exp(-mu_s/2) and P^S_d = 1 - exp(-mu_s/4).
double signal_detection_prob(Orientation signal, Orientation detector,
                             double mu_b_eff, double mu_s_eff);

/// Throws std::domain_error if mu_s_eff == 0 (the ratio is undefined).
InformationResult eve_information(double mu_b_eff, double mu_s_eff);

/// 1 - H2(q).
double information_from_qber(double qber);

struct CurvePoint {
  double mu_b_eff = 0.0;
  MultiClickDistribution clicks;
  InformationResult info;
};

std::vector<CurvePoint> analytic_curves(std::span<const double> mu_b_values,
                                        double mu_s_eff);

}  // namespace blindsim
