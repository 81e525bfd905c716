#include "blindsim/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "blindsim/analytic.hpp"

namespace blindsim {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
  }
}

BitString BitString::from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument(
          fmt::format("invalid bit character '{}'", c));
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitString(std::move(bits));
}

std::string BitString::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(static_cast<char>('0' + b));
  return out;
}

Estimate compute_qber(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(fmt::format(
        "key lengths differ ({} vs {} bits)", a.size(), b.size()));
  }
  if (a.empty()) throw std::invalid_argument("keys are empty");
  std::size_t mismatches = 0;
  const auto x = a.bits();
  const auto y = b.bits();
  for (std::size_t i = 0; i < x.size(); ++i) mismatches += (x[i] != y[i]);
  const double n = static_cast<double>(a.size());
  const double q = static_cast<double>(mismatches) / n;
  return {q, std::sqrt(q * (1.0 - q) / n)};
}

DetectorBank make_detector_bank(const DeadTimeModel& model) {
  return {DetectorState(Polarization::H, model),
          DetectorState(Polarization::V, model),
          DetectorState(Polarization::P45, model),
          DetectorState(Polarization::M45, model)};
}

void SessionConfig::validate() const {
  timing.validate();
  intensity.validate();
  dead_time.validate();
  if (rounds < 1) throw ConfigError("round count must be >= 1");
  const double tau = dead_time.dead_time_s;
  if (!(timing.blinding_offset_s < tau)) {
    throw ConfigError(fmt::format(
        "blinding offset {} s must be shorter than the detector dead time {} s",
        timing.blinding_offset_s, tau));
  }
  if (!(timing.period_s > tau + timing.blinding_offset_s)) {
    throw ConfigError(fmt::format(
        "period {} s must exceed detector dead time + blinding offset ({} s)",
        timing.period_s, tau + timing.blinding_offset_s));
  }
}

KeyBit eve_guess(Polarization blinding, const SiftAnnouncement& announcement,
                 RandomStream& rng) {
  if (announcement.bob_basis == basis_of(blinding)) {
    return encode(orthogonal(blinding));
  }
  return static_cast<KeyBit>(rng.below(2));
}

RoundSimulator::RoundSimulator(const SessionConfig& config)
    : config_(config), detectors_(make_detector_bank(config.dead_time)) {
  const auto& in = config_.intensity;
  for (auto pulse : kPolarizations) {
    for (auto det : kPolarizations) {
      blind_click_[index_of(pulse)][index_of(det)] = -std::expm1(
          -in.mu_b_eff * blinding_coefficient(pulse, det, in.extinction));
      signal_click_[index_of(pulse)][index_of(det)] = -std::expm1(
          -in.mu_s_eff * signal_coefficient(pulse, det, in.e_pol));
    }
  }
}

RoundRecord RoundSimulator::run(std::uint64_t index) {
  RandomStream rng(config_.seed, index);
  return run(index, rng, detectors_);
}

RoundRecord RoundSimulator::run(std::uint64_t index, RandomStream& rng,
                                DetectorBank& detectors) const {
  const auto& timing = config_.timing;
  const double slot = timing.slot_time(index);

  RoundRecord rec;
  rec.index = index;

  std::array<double, kDetectorCount> activity{};
  for (auto& a : activity) a = rng.uniform();

  if (config_.attack) {
    const Polarization pulse = kPolarizations[rng.below(kDetectorCount)];
    rec.blinding = pulse;
    const double t_blind = slot - timing.blinding_offset_s;
    for (std::size_t d = 0; d < kDetectorCount; ++d) {
      const double u = rng.uniform();
      if (detectors[d].is_active(t_blind, activity[d]) &&
          u < blind_click_[index_of(pulse)][d]) {
        rec.blinding_clicks.set(d);
        detectors[d].register_click(t_blind);
      }
    }
  }

  const double t_gate = slot - timing.window_s / 2.0;
  for (std::size_t d = 0; d < kDetectorCount; ++d) {
    if (!detectors[d].is_active(t_gate, activity[d])) {
      rec.all_detectors_active = false;
    }
  }

  const auto basis = static_cast<Basis>(rng.below(2));
  const auto bit = static_cast<KeyBit>(rng.below(2));
  rec.alice = decode(basis, bit);

  DetectorSet active;
  for (std::size_t d = 0; d < kDetectorCount; ++d) {
    active[d] = detectors[d].is_active(slot, activity[d]);
  }
  for (std::size_t d = 0; d < kDetectorCount; ++d) {
    const double u = rng.uniform();
    if (active[d] && u < signal_click_[index_of(rec.alice)][d]) {
      rec.signal_clicks.set(d);
    }
  }
  const double background = config_.intensity.background;
  for (std::size_t d = 0; d < kDetectorCount; ++d) {
    const double u = rng.uniform();
    if (active[d] && u < background) rec.signal_clicks.set(d);
  }

  const std::size_t clicks = rec.signal_clicks.count();
  if (clicks == 0) return rec;
  for (std::size_t d = 0; d < kDetectorCount; ++d) {
    if (rec.signal_clicks[d]) detectors[d].register_click(slot);
  }

  std::size_t pick = clicks == 1 ? 0 : rng.below(clicks);
  for (std::size_t d = 0; d < kDetectorCount; ++d) {
    if (!rec.signal_clicks[d]) continue;
    if (pick == 0) {
      rec.bob_outcome = kPolarizations[d];
      break;
    }
    --pick;
  }

  const Basis bob_basis = basis_of(*rec.bob_outcome);
  rec.announcement = SiftAnnouncement{index, bob_basis, bob_basis == basis};
  if (!rec.announcement->kept) return rec;

  rec.sifted = true;
  rec.alice_bit = bit;
  rec.bob_bit = encode(*rec.bob_outcome);
  rec.eve_guess = rec.blinding
                      ? eve_guess(*rec.blinding, *rec.announcement, rng)
                      : static_cast<KeyBit>(rng.below(2));
  return rec;
}

RoundRecord run_round(const SessionConfig& config, DetectorBank& detectors,
                      RandomStream& rng, std::uint64_t index) {
  return RoundSimulator(config).run(index, rng, detectors);
}

SessionAccumulator::SessionAccumulator(bool gated,
                                       std::uint64_t expected_rounds) {
  partial_.gated = gated;
  const auto hint = static_cast<std::size_t>(expected_rounds / 40);
  partial_.alice_key.reserve(hint);
  partial_.bob_key.reserve(hint);
  partial_.eve_key.reserve(hint);
}

void SessionAccumulator::add(const RoundRecord& record) {
  auto& r = partial_;
  ++r.rounds;
  ++r.blinding_counts[record.blinding_clicks.count()];
  if (record.all_detectors_active) ++r.gate_passed;
  if (r.gated && !record.all_detectors_active) return;
  if (record.bob_outcome) ++r.detections;
  if (!record.sifted) return;
  r.alice_key.push_back(record.alice_bit);
  r.bob_key.push_back(record.bob_bit);
  r.eve_key.push_back(record.eve_guess.value_or(KeyBit::Zero));
}

namespace {

Estimate proportion(std::uint64_t hits, std::uint64_t n) {
  if (n == 0) return {};
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

}  // namespace

SessionResult SessionAccumulator::finish() const {
  SessionResult r = partial_;
  for (std::size_t k = 0; k < r.blinding_counts.size(); ++k) {
    r.blinding_histogram[k] = proportion(r.blinding_counts[k], r.rounds);
  }
  r.gate_kept_fraction = proportion(r.gate_passed, r.rounds);
  if (!r.empty()) {
    r.qber_ab = compute_qber(r.alice_key, r.bob_key);
    r.qber_be = compute_qber(r.bob_key, r.eve_key);
    r.i_eb = information_from_qber(r.qber_be->value);
    r.overlap = 1.0 - r.qber_be->value;
  }
  return r;
}

SessionResult run_session(const SessionConfig& config) {
  SessionAccumulator acc(false, config.rounds);
  for_each_round(config, [&](const RoundRecord& rec) { acc.add(rec); });
  return acc.finish();
}

SessionPair run_session_pair(const SessionConfig& config) {
  SessionAccumulator ungated(false, config.rounds);
  SessionAccumulator gated(true, config.rounds);
  for_each_round(config, [&](const RoundRecord& rec) {
    ungated.add(rec);
    gated.add(rec);
  });
  return {ungated.finish(), gated.finish()};
}

}  // namespace blindsim
