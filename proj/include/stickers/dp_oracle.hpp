// Absorbing-chain evaluation of the completion-time distribution.
//
// State is the number of distinct sticker types owned. Every quantity in the
// sweep is a non-negative sum of non-negative products, so plain double
// arithmetic is cancellation-free; this is the independent oracle the
// inclusion-exclusion path is checked against, and the only analytic path
// for the iid packet model.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "stickers/combinatorics.hpp"
#include "stickers/numeric.hpp"
#include "stickers/types.hpp"

namespace stickers::dp {

// Law of the number of new sticker types in one packet, given m types owned.
// Index j of the result runs 0..n.
inline std::vector<Rational> transition_distribution(const AlbumSpec& spec, PacketModel model,
                                                     int owned) {
  int N = spec.total_stickers;
  int n = spec.packet_size;
  if (owned < 0 || owned > N) throw std::invalid_argument("owned count out of range");
  std::vector<Rational> law(static_cast<std::size_t>(n) + 1);
  if (model == PacketModel::DistinctWithinPacket) {
    Integer denom = binomial(N, n);
    for (int j = 0; j <= n; ++j)
      law[static_cast<std::size_t>(j)] =
          Rational(binomial(N - owned, j) * binomial(owned, n - j), denom);
  } else {
    // Compose n single-draw steps; a draw from m' owned types is new with
    // probability (N - m')/N.
    law[0] = 1;
    for (int t = 0; t < n; ++t) {
      for (int j = std::min(t + 1, n); j >= 0; --j) {
        Rational stay = Rational(owned + j, N);
        Rational arrive = j > 0 ? Rational(N - (owned + j - 1), N) : Rational(0);
        law[static_cast<std::size_t>(j)] =
            law[static_cast<std::size_t>(j)] * stay +
            (j > 0 ? law[static_cast<std::size_t>(j) - 1] * arrive : Rational(0));
      }
    }
  }
  return law;
}

// Forward sweep of the owned-count distribution, one packet per step.
class OwnedCountSweep {
 public:
  OwnedCountSweep(const AlbumSpec& spec, PacketModel model) : spec_(spec), model_(model) {
    int N = spec.total_stickers;
    mass_.assign(static_cast<std::size_t>(N) + 1, 0.0);
    mass_[0] = 1.0;
    scratch_.assign(mass_.size(), 0.0);
    if (model == PacketModel::DistinctWithinPacket) {
      rows_.reserve(static_cast<std::size_t>(N));
      for (int m = 0; m < N; ++m) {
        auto law = transition_distribution(spec, model, m);
        std::vector<double> row(law.size());
        for (std::size_t j = 0; j < law.size(); ++j) row[j] = to_double(law[j]);
        rows_.push_back(std::move(row));
      }
    } else {
      stay_.resize(mass_.size());
      gain_.resize(mass_.size());
      for (int m = 0; m <= N; ++m) {
        stay_[static_cast<std::size_t>(m)] = static_cast<double>(m) / N;
        gain_[static_cast<std::size_t>(m)] = static_cast<double>(N - m) / N;
      }
    }
  }

  std::int64_t k() const { return k_; }
  const std::vector<double>& mass() const { return mass_; }

  // Non-absorbed probability, summed directly so no cancellation occurs even
  // deep in the tail.
  double survival() const {
    double s = 0.0;
    for (std::size_t m = 0; m + 1 < mass_.size(); ++m) s += mass_[m];
    return s;
  }

  double completed() const { return mass_.back(); }

  void advance() {
    ++k_;
    int N = spec_.total_stickers;
    if (model_ == PacketModel::DistinctWithinPacket) {
      std::fill(scratch_.begin(), scratch_.end(), 0.0);
      scratch_.back() = mass_.back();
      for (int m = 0; m < N; ++m) {
        double v = mass_[static_cast<std::size_t>(m)];
        if (v == 0.0) continue;
        const auto& row = rows_[static_cast<std::size_t>(m)];
        for (std::size_t j = 0; j < row.size(); ++j)
          if (row[j] != 0.0) scratch_[static_cast<std::size_t>(m) + j] += v * row[j];
      }
      mass_.swap(scratch_);
    } else {
      for (int t = 0; t < spec_.packet_size; ++t) {
        for (int m = N; m >= 1; --m)
          mass_[static_cast<std::size_t>(m)] =
              mass_[static_cast<std::size_t>(m)] * stay_[static_cast<std::size_t>(m)] +
              mass_[static_cast<std::size_t>(m) - 1] * gain_[static_cast<std::size_t>(m) - 1];
        mass_[0] *= stay_[0];
      }
    }
  }

 private:
  AlbumSpec spec_;
  PacketModel model_;
  std::vector<double> mass_;
  std::vector<double> scratch_;
  std::vector<std::vector<double>> rows_;  // distinct model transition rows
  std::vector<double> stay_, gain_;        // iid single-draw rates
  std::int64_t k_ = 0;
};

inline double survival_dp(const AlbumSpec& spec, PacketModel model, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("packet count must be non-negative");
  OwnedCountSweep sweep(spec, model);
  for (std::int64_t step = 0; step < k; ++step) sweep.advance();
  return sweep.survival();
}

struct ExpectationResult {
  double expectation = 0.0;
  double tail_bound = 0.0;  // certified bound on the truncated remainder
};

namespace detail {

// Shared truncation loop: runs the sweep until survival < tail_tolerance,
// calling observe(k, survival) at every step. Past the coverage bound the
// true survival strictly decreases, so a long run of bit-identical values
// means the double tail has saturated and the tolerance is unreachable.
template <typename Observer>
ExpectationResult truncated_expectation(const AlbumSpec& spec, PacketModel model,
                                        double tail_tolerance, std::int64_t k_limit,
                                        Observer&& observe) {
  if (tail_tolerance <= 0) throw std::invalid_argument("tail tolerance must be positive");
  OwnedCountSweep sweep(spec, model);
  std::int64_t coverage = spec.coverage_bound();
  double expectation = 1.0;  // survival(0)
  observe(static_cast<std::int64_t>(0), 1.0);
  double prev = 1.0;
  int stalled = 0;
  for (;;) {
    if (sweep.k() >= k_limit)
      throw precision_error("owned-count sweep hit the step limit before the tail tolerance");
    sweep.advance();
    double s = sweep.survival();
    observe(sweep.k(), s);
    if (s < tail_tolerance) {
      double rho = prev > 0.0 ? s / prev : 0.0;
      if (rho >= 1.0)
        throw precision_error("survival ratio reached 1 at truncation; tail does not converge");
      ExpectationResult result;
      result.expectation = expectation + s;
      result.tail_bound = s * rho / (1.0 - rho);
      return result;
    }
    expectation += s;
    if (sweep.k() > coverage) {
      stalled = (s >= prev) ? stalled + 1 : 0;
      if (stalled >= 64)
        throw precision_error(
            "survival stopped decreasing above the tail tolerance; the tolerance is below "
            "double-precision resolution for this album");
    }
    prev = s;
  }
}

}  // namespace detail

inline ExpectationResult expectation_dp(const AlbumSpec& spec, PacketModel model,
                                        double tail_tolerance = 1e-12,
                                        std::int64_t k_limit = 10000000) {
  return detail::truncated_expectation(spec, model, tail_tolerance, k_limit,
                                       [](std::int64_t, double) {});
}

// Smallest k whose CDF reaches p (left-continuous inverse CDF).
inline std::int64_t quantile_dp(const AlbumSpec& spec, PacketModel model, double p,
                                std::int64_t k_limit = 10000000) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile level must be in (0,1)");
  OwnedCountSweep sweep(spec, model);
  std::int64_t coverage = spec.coverage_bound();
  double target = 1.0 - p;  // CDF >= p is survival <= 1-p
  double prev = 1.0;
  int stalled = 0;
  while (sweep.survival() > target) {
    if (sweep.k() >= k_limit)
      throw precision_error("quantile sweep hit the step limit");
    sweep.advance();
    double s = sweep.survival();
    if (sweep.k() > coverage) {
      stalled = (s >= prev) ? stalled + 1 : 0;
      if (stalled >= 64)
        throw precision_error("quantile level is beyond double-precision tail resolution");
    }
    prev = s;
  }
  return sweep.k();
}

inline CompletionDistribution completion_distribution(const AlbumSpec& spec, PacketModel model,
                                                      double tail_tolerance = 1e-12,
                                                      std::int64_t k_limit = 10000000) {
  CompletionDistribution dist;
  dist.spec = spec;
  dist.model = model;
  dist.method = DistributionMethod::DynamicProgram;
  auto result = detail::truncated_expectation(
      spec, model, tail_tolerance, k_limit,
      [&dist](std::int64_t k, double s) { dist.survival[k] = s; });
  dist.expectation = result.expectation;
  return dist;
}

}  // namespace stickers::dp
