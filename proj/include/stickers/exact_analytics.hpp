// Closed-form probability machinery for album completion.
//
// Everything here is inclusion-exclusion over the per-packet miss
// probabilities p_i (the chance one packet avoids a fixed set of i sticker
// types). Quantities free of k-th powers are computed in exact rational
// arithmetic; survival/pmf values at large N go through arbitrary-precision
// floats because the alternating terms reach magnitude C(N, N/2) < 2^N and
// would annihilate any fixed-width format.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "stickers/bigfloat.hpp"
#include "stickers/combinatorics.hpp"
#include "stickers/numeric.hpp"
#include "stickers/types.hpp"

namespace stickers::exact {

inline Rational harmonic_number(int n) {
  if (n < 1) throw std::invalid_argument("harmonic number needs n >= 1");
  Rational sum = 0;
  for (int i = 1; i <= n; ++i) sum += Rational(1, i);
  return sum;
}

// Expected single stickers to complete an album of N types: N * H_N.
inline Rational expected_stickers_exact(int total_stickers) {
  return harmonic_number(total_stickers) * total_stickers;
}

// N(ln N + g) + 1/2 with g the ten-digit Euler-Mascheroni value.
inline double expected_stickers_approx(int total_stickers) {
  if (total_stickers < 1) throw std::invalid_argument("album size must be positive");
  constexpr double euler_gamma = 0.5772156649;
  double n = total_stickers;
  return n * (std::log(n) + euler_gamma) + 0.5;
}

// Chance that one packet avoids all of a fixed set of r sticker types.
inline Rational packet_miss_probability(const AlbumSpec& spec, PacketModel model, int r) {
  if (r < 0 || r > spec.total_stickers) throw std::invalid_argument("subset size out of range");
  if (model == PacketModel::DistinctWithinPacket)
    return Rational(binomial(spec.total_stickers - r, spec.packet_size),
                    binomial(spec.total_stickers, spec.packet_size));
  return rational_pow(Rational(spec.total_stickers - r, spec.total_stickers), spec.packet_size);
}

inline ExactProbability miss_probability(const AlbumSpec& spec, int r) {
  return ExactProbability(packet_miss_probability(spec, PacketModel::DistinctWithinPacket, r));
}

namespace detail {

inline double boundary_slack() { return std::ldexp(1.0, -40); }

// Convert an alternating-sum result to a probability, allowing 2^-40 of
// rounding dust outside [0,1] and treating anything worse as lost precision.
inline double finalize_probability(double v) {
  double slack = boundary_slack();
  if (v < -slack || v > 1.0 + slack)
    throw precision_error("alternating sum left [0,1]: got " + std::to_string(v) +
                          ", working precision is insufficient");
  return std::clamp(v, 0.0, 1.0);
}

// Sum over i of (-1)^(i-1) C(N,i) p_i^k at cfg precision.
inline double alternating_power_sum(const AlbumSpec& spec, PacketModel model, std::int64_t k,
                                    const BigFloatConfig& cfg) {
  require_precision(cfg, spec.total_stickers);
  if (k < 0) throw std::invalid_argument("packet count must be non-negative");
  int n_terms = spec.total_stickers;
  auto binomials = binomial_row(n_terms);
  BigFloat sum(cfg.precision_bits);
  BigFloat term(cfg.precision_bits);
  for (int i = 1; i <= n_terms; ++i) {
    Rational p = packet_miss_probability(spec, model, i);
    if (p == 0 && k > 0) continue;
    term.set(p);
    term.pow(static_cast<unsigned long>(k));
    term.mul(binomials[static_cast<std::size_t>(i)]);
    if (i % 2 == 0) term.neg();
    sum.add(term);
  }
  return finalize_probability(sum.to_double());
}

inline Rational alternating_power_sum_rational(const AlbumSpec& spec, PacketModel model,
                                               std::int64_t k) {
  if (k < 0) throw std::invalid_argument("packet count must be non-negative");
  int n_terms = spec.total_stickers;
  auto binomials = binomial_row(n_terms);
  Rational sum = 0;
  for (int i = 1; i <= n_terms; ++i) {
    Rational p = packet_miss_probability(spec, model, i);
    if (p == 0 && k > 0) continue;
    Rational term = rational_pow(p, k) * binomials[static_cast<std::size_t>(i)];
    sum += (i % 2 == 1) ? term : -term;
  }
  return sum;
}

}  // namespace detail

// P(T > k) for the distinct-within-packet model, arbitrary-precision path.
inline double survival_exact(const AlbumSpec& spec, std::int64_t k, const BigFloatConfig& cfg) {
  return detail::alternating_power_sum(spec, PacketModel::DistinctWithinPacket, k, cfg);
}

// Exact-rational reference for survival_exact. Cost grows with k through the
// p_i^k powers; intended for small albums and spot checks.
inline Rational survival_rational(const AlbumSpec& spec, std::int64_t k) {
  return detail::alternating_power_sum_rational(spec, PacketModel::DistinctWithinPacket, k);
}

// P(T = k) = sum over i of (-1)^(i-1) C(N,i) p_i^(k-1) (1 - p_i).
inline double pmf_exact(const AlbumSpec& spec, std::int64_t k, const BigFloatConfig& cfg) {
  require_precision(cfg, spec.total_stickers);
  if (k < 1) throw std::invalid_argument("pmf is defined for k >= 1");
  int n_terms = spec.total_stickers;
  auto binomials = binomial_row(n_terms);
  BigFloat sum(cfg.precision_bits);
  BigFloat term(cfg.precision_bits);
  BigFloat factor(cfg.precision_bits);
  for (int i = 1; i <= n_terms; ++i) {
    Rational p = packet_miss_probability(spec, PacketModel::DistinctWithinPacket, i);
    if (p == 0 && k > 1) continue;
    term.set(p);
    term.pow(static_cast<unsigned long>(k - 1));
    term.mul(binomials[static_cast<std::size_t>(i)]);
    factor.set(Rational(1) - p);
    term.mul(factor);
    if (i % 2 == 0) term.neg();
    sum.add(term);
  }
  return detail::finalize_probability(sum.to_double());
}

inline Rational pmf_rational(const AlbumSpec& spec, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("pmf is defined for k >= 1");
  int n_terms = spec.total_stickers;
  auto binomials = binomial_row(n_terms);
  Rational sum = 0;
  for (int i = 1; i <= n_terms; ++i) {
    Rational p = packet_miss_probability(spec, PacketModel::DistinctWithinPacket, i);
    if (p == 0 && k > 1) continue;
    Rational term = rational_pow(p, k - 1) * binomials[static_cast<std::size_t>(i)] * (Rational(1) - p);
    sum += (i % 2 == 1) ? term : -term;
  }
  return sum;
}

// E(T) = sum over i of (-1)^(i-1) C(N,i) / (1 - p_i). No k-th powers appear,
// so the exact-rational path is feasible at any album size and is the
// reference the float path is tested against.
inline Rational expected_packets_rational(const AlbumSpec& spec,
                                          PacketModel model = PacketModel::DistinctWithinPacket) {
  int n_terms = spec.total_stickers;
  auto binomials = binomial_row(n_terms);
  Rational sum = 0;
  for (int i = 1; i <= n_terms; ++i) {
    Rational p = packet_miss_probability(spec, model, i);
    Rational term = binomials[static_cast<std::size_t>(i)] / (Rational(1) - p);
    sum += (i % 2 == 1) ? term : -term;
  }
  return sum;
}

inline double expected_packets_exact(const AlbumSpec& spec, const BigFloatConfig& cfg,
                                     PacketModel model = PacketModel::DistinctWithinPacket) {
  require_precision(cfg, spec.total_stickers);
  int n_terms = spec.total_stickers;
  auto binomials = binomial_row(n_terms);
  BigFloat sum(cfg.precision_bits);
  BigFloat term(cfg.precision_bits);
  BigFloat denom(cfg.precision_bits);
  for (int i = 1; i <= n_terms; ++i) {
    Rational p = packet_miss_probability(spec, model, i);
    term.set(binomials[static_cast<std::size_t>(i)]);
    denom.set(Rational(1) - p);
    term.div(denom);
    if (i % 2 == 0) term.neg();
    sum.add(term);
  }
  double value = sum.to_double();
  if (value < 0) throw precision_error("expectation sum collapsed below zero");
  return value;
}

// P(R > r): chance that r iid single-sticker draws miss at least one of the
// N types. The iid packet model reduces to this with r = n*k.
inline double sticker_survival_iid(int total_stickers, std::int64_t r, const BigFloatConfig& cfg) {
  AlbumSpec singles(total_stickers, 1);
  return detail::alternating_power_sum(singles, PacketModel::IidWithReplacement, r, cfg);
}

inline double sticker_survival_iid(int total_stickers, std::int64_t r) {
  return sticker_survival_iid(total_stickers, r, BigFloatConfig::for_album(total_stickers));
}

inline Rational sticker_survival_iid_rational(int total_stickers, std::int64_t r) {
  AlbumSpec singles(total_stickers, 1);
  return detail::alternating_power_sum_rational(singles, PacketModel::IidWithReplacement, r);
}

// Chance a packet of n iid draws contains no repeated type.
inline double all_distinct_packet_probability(const AlbumSpec& spec) {
  Rational product = 1;
  for (int j = 1; j < spec.packet_size; ++j)
    product *= Rational(spec.total_stickers - j, spec.total_stickers);
  return to_double(product);
}

// Incremental k-sweep of the survival function: one multiply per term per
// step instead of a fresh exponentiation, so a full table costs one pass.
class SurvivalSweep {
 public:
  SurvivalSweep(const AlbumSpec& spec, PacketModel model, const BigFloatConfig& cfg)
      : spec_(spec), sum_(cfg.precision_bits) {
    require_precision(cfg, spec.total_stickers);
    auto binomials = binomial_row(spec.total_stickers);
    factors_.reserve(static_cast<std::size_t>(spec.total_stickers));
    terms_.reserve(static_cast<std::size_t>(spec.total_stickers));
    for (int i = 1; i <= spec.total_stickers; ++i) {
      Rational p = packet_miss_probability(spec, model, i);
      if (p == 0) break;  // p_i is non-increasing in i; zero terms die after one step
      factors_.push_back(BigFloat::from(p, cfg.precision_bits));
      terms_.push_back(BigFloat::from(binomials[static_cast<std::size_t>(i)], cfg.precision_bits));
    }
    // Terms with p_i = 0 still contribute C(N,i) at k = 0; by the binomial
    // theorem the full alternating sum at k = 0 is exactly 1.
    survival_ = 1.0;
  }

  std::int64_t k() const { return k_; }
  double survival() const { return survival_; }

  void advance() {
    ++k_;
    sum_.set(0ul);
    for (std::size_t idx = 0; idx < terms_.size(); ++idx) {
      terms_[idx].mul(factors_[idx]);
      if (idx % 2 == 0)
        sum_.add(terms_[idx]);
      else
        sum_.sub(terms_[idx]);
    }
    survival_ = detail::finalize_probability(sum_.to_double());
  }

 private:
  AlbumSpec spec_;
  std::vector<BigFloat> factors_;
  std::vector<BigFloat> terms_;
  BigFloat sum_;
  std::int64_t k_ = 0;
  double survival_ = 1.0;
};

// Full survival curve swept until the tail drops below tail_tolerance.
inline CompletionDistribution completion_distribution(const AlbumSpec& spec, PacketModel model,
                                                      const BigFloatConfig& cfg,
                                                      double tail_tolerance = 1e-12,
                                                      std::int64_t k_limit = 1000000) {
  if (tail_tolerance <= 0) throw std::invalid_argument("tail tolerance must be positive");
  CompletionDistribution dist;
  dist.spec = spec;
  dist.model = model;
  dist.method = DistributionMethod::InclusionExclusion;
  SurvivalSweep sweep(spec, model, cfg);
  dist.survival[0] = 1.0;
  while (sweep.survival() >= tail_tolerance) {
    if (sweep.k() >= k_limit)
      throw precision_error("survival sweep failed to reach tail tolerance by the step limit");
    sweep.advance();
    dist.survival[sweep.k()] = sweep.survival();
  }
  dist.expectation = expected_packets_exact(spec, cfg, model);
  return dist;
}

}  // namespace stickers::exact
