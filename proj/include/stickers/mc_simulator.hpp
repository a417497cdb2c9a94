// Seeded Monte Carlo simulation of album collection.
//
// Replication i of a batch draws from its own generator stream derived only
// from (master_seed, i), so outcomes are a pure function of the seed and
// index. Batch reduction touches only integer counts and exact rationals,
// which makes the summary bit-identical across thread counts.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "stickers/numeric.hpp"
#include "stickers/rng.hpp"
#include "stickers/types.hpp"

namespace stickers::mc {

struct SimulationConfig {
  AlbumSpec spec;
  PacketModel model = PacketModel::IidWithReplacement;
  std::int64_t replications = 100000;
  std::uint64_t master_seed = 20220801;
  int threads = 1;  // <= 0 means hardware concurrency
};

struct ReplicationOutcome {
  std::int64_t packets = 0;
  std::int64_t duplicates = 0;
};

struct HistogramBin {
  std::int64_t lower = 0;  // inclusive
  std::int64_t upper = 0;  // exclusive
  std::int64_t count = 0;
};

struct BatchSummary {
  std::int64_t replications = 0;
  Rational mean_packets;  // exact: total packets / replications
  Rational mean_duplicates;
  std::int64_t min_packets = 0;
  std::int64_t max_packets = 0;
  std::int64_t q25 = 0;
  std::int64_t q50 = 0;
  std::int64_t q75 = 0;
  std::vector<HistogramBin> histogram;
  std::map<std::int64_t, std::int64_t> frequency;  // packets -> replication count
  // Cost quoted for the displayed mean: price * (mean rounded to 2 places).
  Rational total_cost_mean;
};

// Stream seed for replication `index` of a batch; also used directly by
// Xoshiro256PlusPlus::for_stream.
inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) {
  return master_seed + (index + 1) * 0x9E3779B97F4A7C15ull;
}

// Single-collection engine with reusable scratch state.
class Collector {
 public:
  Collector(const AlbumSpec& spec, PacketModel model) : spec_(spec), model_(model) {
    owned_.assign(static_cast<std::size_t>(spec.total_stickers), 0);
    if (model == PacketModel::DistinctWithinPacket) {
      permutation_.resize(static_cast<std::size_t>(spec.total_stickers));
      for (std::uint32_t i = 0; i < permutation_.size(); ++i) permutation_[i] = i;
    }
  }

  // Runs one collection to completion; after_packet(k, owned_count) fires
  // once per packet bought.
  template <typename PacketHook>
  ReplicationOutcome run(Xoshiro256PlusPlus& rng, PacketHook&& after_packet) {
    std::fill(owned_.begin(), owned_.end(), 0);
    // Reset the shuffle state so a replication's outcome is a pure function
    // of its generator stream, not of whatever ran on this collector before.
    std::iota(permutation_.begin(), permutation_.end(), std::uint32_t{0});
    auto total = static_cast<std::uint32_t>(spec_.total_stickers);
    int per_packet = spec_.packet_size;
    std::uint32_t owned_count = 0;
    ReplicationOutcome outcome;
    while (owned_count < total) {
      if (model_ == PacketModel::IidWithReplacement) {
        for (int t = 0; t < per_packet; ++t) {
          std::uint32_t pick = rng.uniform_below(total);
          if (owned_[pick] == 0) {
            owned_[pick] = 1;
            ++owned_count;
          } else {
            ++outcome.duplicates;
          }
        }
      } else {
        // Partial Fisher-Yates: after the loop the first n slots hold a
        // uniform n-subset, whatever arrangement the last packet left.
        for (int t = 0; t < per_packet; ++t) {
          std::uint32_t swap_at = static_cast<std::uint32_t>(t) +
                                  rng.uniform_below(total - static_cast<std::uint32_t>(t));
          std::swap(permutation_[static_cast<std::size_t>(t)],
                    permutation_[swap_at]);
          std::uint32_t pick = permutation_[static_cast<std::size_t>(t)];
          if (owned_[pick] == 0) {
            owned_[pick] = 1;
            ++owned_count;
          } else {
            ++outcome.duplicates;
          }
        }
      }
      ++outcome.packets;
      after_packet(outcome.packets, static_cast<std::int64_t>(owned_count));
    }
    return outcome;
  }

  ReplicationOutcome run(Xoshiro256PlusPlus& rng) {
    return run(rng, [](std::int64_t, std::int64_t) {});
  }

  // Owned sticker ids (1-based) in increasing order, valid after run().
  std::vector<int> owned_stickers() const {
    std::vector<int> ids;
    for (std::size_t i = 0; i < owned_.size(); ++i)
      if (owned_[i]) ids.push_back(static_cast<int>(i) + 1);
    return ids;
  }

 private:
  AlbumSpec spec_;
  PacketModel model_;
  std::vector<char> owned_;
  std::vector<std::uint32_t> permutation_;
};

inline ReplicationOutcome simulate_one(const AlbumSpec& spec, PacketModel model,
                                       std::uint64_t stream_seed) {
  Collector collector(spec, model);
  Xoshiro256PlusPlus rng(stream_seed);
  return collector.run(rng);
}

// All replications of a batch, in replication-index order.
inline std::vector<ReplicationOutcome> simulate_raw(const SimulationConfig& config) {
  if (config.replications < 1) throw std::invalid_argument("replications must be >= 1");
  std::int64_t count = config.replications;
  std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(count));

  int threads = config.threads;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (static_cast<std::int64_t>(threads) > count) threads = static_cast<int>(count);

  auto worker = [&](std::int64_t begin, std::int64_t end) {
    Collector collector(config.spec, config.model);
    for (std::int64_t i = begin; i < end; ++i) {
      auto rng = Xoshiro256PlusPlus::for_stream(config.master_seed,
                                                static_cast<std::uint64_t>(i));
      outcomes[static_cast<std::size_t>(i)] = collector.run(rng);
    }
  };

  if (threads == 1) {
    worker(0, count);
    return outcomes;
  }

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  std::int64_t chunk = (count + threads - 1) / threads;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < threads; ++w) {
    std::int64_t begin = w * chunk;
    std::int64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        worker(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> hold(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

namespace detail {

// Half-open bins [anchor + t*w, anchor + (t+1)*w) covering all values;
// anchor must be a multiple of w at or below the smallest value.
inline std::vector<HistogramBin> bin_counts(const std::map<std::int64_t, std::int64_t>& frequency,
                                            std::int64_t bin_width, std::int64_t anchor) {
  std::vector<HistogramBin> bins;
  if (frequency.empty()) return bins;
  std::int64_t last_value = frequency.rbegin()->first;
  for (std::int64_t lower = anchor; lower <= last_value; lower += bin_width)
    bins.push_back({lower, lower + bin_width, 0});
  for (const auto& [value, count] : frequency) {
    auto idx = static_cast<std::size_t>((value - anchor) / bin_width);
    bins[idx].count += count;
  }
  return bins;
}

inline std::int64_t floor_multiple(std::int64_t value, std::int64_t width) {
  std::int64_t q = value / width;
  if (value % width != 0 && value < 0) --q;
  return q * width;
}

}  // namespace detail

// Smallest value whose empirical CDF reaches p: cum(count) >= ceil(p * total).
inline std::int64_t quantile_from_frequency(const std::map<std::int64_t, std::int64_t>& frequency,
                                            std::int64_t total, const Rational& p) {
  if (p <= 0 || p > 1) throw std::invalid_argument("quantile level must be in (0,1]");
  Rational scaled = p * total;
  Integer rank = numerator(scaled) / denominator(scaled);
  if (rank * denominator(scaled) != numerator(scaled)) rank += 1;  // ceiling
  Integer cumulative = 0;
  for (const auto& [value, count] : frequency) {
    cumulative += count;
    if (cumulative >= rank) return value;
  }
  throw std::logic_error("frequency table does not cover the requested rank");
}

// Deterministic reduction of a batch; independent of how outcomes were
// produced because it reads them in replication order.
inline BatchSummary summarize(const SimulationConfig& config,
                              const std::vector<ReplicationOutcome>& outcomes,
                              std::int64_t bin_width = 50) {
  if (outcomes.empty()) throw std::invalid_argument("cannot summarize an empty batch");
  if (bin_width < 1) throw std::invalid_argument("bin width must be positive");
  BatchSummary summary;
  summary.replications = static_cast<std::int64_t>(outcomes.size());
  Integer total_packets = 0;
  Integer total_duplicates = 0;
  summary.min_packets = outcomes.front().packets;
  summary.max_packets = outcomes.front().packets;
  for (const auto& outcome : outcomes) {
    total_packets += outcome.packets;
    total_duplicates += outcome.duplicates;
    summary.min_packets = std::min(summary.min_packets, outcome.packets);
    summary.max_packets = std::max(summary.max_packets, outcome.packets);
    summary.frequency[outcome.packets] += 1;
  }
  summary.mean_packets = Rational(total_packets, Integer(summary.replications));
  summary.mean_duplicates = Rational(total_duplicates, Integer(summary.replications));
  summary.q25 = quantile_from_frequency(summary.frequency, summary.replications, Rational(1, 4));
  summary.q50 = quantile_from_frequency(summary.frequency, summary.replications, Rational(1, 2));
  summary.q75 = quantile_from_frequency(summary.frequency, summary.replications, Rational(3, 4));
  std::int64_t anchor = detail::floor_multiple(
      std::min(config.spec.coverage_bound(), summary.min_packets), bin_width);
  summary.histogram = detail::bin_counts(summary.frequency, bin_width, anchor);
  Rational displayed_mean(round_scaled_half_even(summary.mean_packets, 2), pow10(2));
  summary.total_cost_mean = config.spec.packet_price * displayed_mean;
  return summary;
}

inline BatchSummary simulate_batch(const SimulationConfig& config, std::int64_t bin_width = 50,
                                   std::vector<ReplicationOutcome>* raw_out = nullptr) {
  auto outcomes = simulate_raw(config);
  auto summary = summarize(config, outcomes, bin_width);
  if (raw_out != nullptr) *raw_out = std::move(outcomes);
  return summary;
}

// Per-packet trace of one collection, with owned-set snapshots on request.
struct TraceRecord {
  ReplicationOutcome outcome;
  std::vector<std::int64_t> owned_after_packet;  // index k-1: count after packet k
  struct Snapshot {
    std::int64_t packet = 0;
    std::vector<int> owned;  // sticker ids, 1-based
  };
  std::vector<Snapshot> snapshots;
};

inline TraceRecord trace_collection(const AlbumSpec& spec, PacketModel model,
                                    std::uint64_t stream_seed,
                                    const std::vector<std::int64_t>& snapshot_at = {}) {
  for (std::size_t i = 1; i < snapshot_at.size(); ++i)
    if (snapshot_at[i] <= snapshot_at[i - 1])
      throw std::invalid_argument("snapshot indices must be strictly increasing");
  if (!snapshot_at.empty() && snapshot_at.front() < 1)
    throw std::invalid_argument("snapshot indices start at packet 1");

  TraceRecord record;
  Collector collector(spec, model);
  Xoshiro256PlusPlus rng(stream_seed);
  std::size_t next_snapshot = 0;
  record.outcome = collector.run(rng, [&](std::int64_t packet, std::int64_t owned_count) {
    record.owned_after_packet.push_back(owned_count);
    if (next_snapshot < snapshot_at.size() && snapshot_at[next_snapshot] == packet) {
      record.snapshots.push_back({packet, collector.owned_stickers()});
      ++next_snapshot;
    }
  });
  // Requests beyond completion see the finished album.
  for (; next_snapshot < snapshot_at.size(); ++next_snapshot)
    record.snapshots.push_back({snapshot_at[next_snapshot], collector.owned_stickers()});
  return record;
}

}  // namespace stickers::mc
