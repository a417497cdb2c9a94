// Plot-ready deliverables: completion tables, CDF curves, histograms, batch
// summaries, and their CSV/JSON serializations.
//
// Rendering convention: probabilities at 5 decimal places, currency at 2,
// both round-half-even. A row whose exact value sits within 1e-9 of a
// rounding boundary is flagged so golden comparisons can treat it honestly.
#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "stickers/dp_oracle.hpp"
#include "stickers/exact_analytics.hpp"
#include "stickers/mc_simulator.hpp"
#include "stickers/numeric.hpp"
#include "stickers/types.hpp"

namespace stickers::report {

inline constexpr int kProbabilityPlaces = 5;
inline constexpr int kCurrencyPlaces = 2;

enum class Backend { Exact, Dp };

inline Backend backend_from_string(std::string_view name) {
  if (name == "exact") return Backend::Exact;
  if (name == "dp") return Backend::Dp;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

// k * price, exact decimal arithmetic.
inline Rational cost_of(std::int64_t k, const Rational& price) {
  if (k < 0 || price < 0) throw std::invalid_argument("cost needs k >= 0 and price >= 0");
  return price * k;
}

namespace detail {

// True when value is within 1e-9 of a half-way rounding point at `places`.
inline bool near_rounding_boundary(const Rational& value, int places) {
  Rational scaled = value * pow10(places);
  Integer whole = numerator(scaled) / denominator(scaled);
  if (scaled < 0 && whole * denominator(scaled) != numerator(scaled)) whole -= 1;
  Rational fraction = scaled - whole;
  Rational distance = fraction - Rational(1, 2);
  if (distance < 0) distance = -distance;
  return distance < Rational(pow10(places), pow10(9));
}

}  // namespace detail

struct CompletionTableRow {
  std::int64_t k = 0;
  double completion_probability = 0.0;
  std::string probability;  // 5-place rendering
  Rational cost;
  std::string cost_text;  // 2-place rendering
  bool near_boundary = false;
};

inline CompletionTableRow make_row(const AlbumSpec& spec, std::int64_t k, double survival) {
  CompletionTableRow row;
  row.k = k;
  row.completion_probability = 1.0 - survival;
  Rational exact_cdf = Rational(1) - rational_from_double(survival);
  row.probability = render_fixed(exact_cdf, kProbabilityPlaces);
  row.near_boundary = detail::near_rounding_boundary(exact_cdf, kProbabilityPlaces);
  row.cost = cost_of(k, spec.packet_price);
  row.cost_text = render_fixed(row.cost, kCurrencyPlaces);
  return row;
}

namespace detail {

// Visit survival values at each requested k with a single forward sweep.
template <typename Visit>
void sweep_survival(const AlbumSpec& spec, PacketModel model, Backend backend,
                    const BigFloatConfig& cfg, const std::vector<std::int64_t>& ks,
                    Visit&& visit) {
  if (ks.empty()) throw std::invalid_argument("need at least one packet count");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 0) throw std::invalid_argument("packet counts must be non-negative");
    if (i > 0 && ks[i] <= ks[i - 1])
      throw std::invalid_argument("packet counts must be strictly increasing");
  }
  if (backend == Backend::Exact) {
    exact::SurvivalSweep sweep(spec, model, cfg);
    for (std::int64_t k : ks) {
      while (sweep.k() < k) sweep.advance();
      visit(k, sweep.survival());
    }
  } else {
    dp::OwnedCountSweep sweep(spec, model);
    for (std::int64_t k : ks) {
      while (sweep.k() < k) sweep.advance();
      visit(k, sweep.survival());
    }
  }
}

}  // namespace detail

inline std::vector<CompletionTableRow> completion_table(
    const AlbumSpec& spec, const std::vector<std::int64_t>& ks, Backend backend,
    PacketModel model, const BigFloatConfig& cfg) {
  std::vector<CompletionTableRow> rows;
  rows.reserve(ks.size());
  detail::sweep_survival(spec, model, backend, cfg, ks, [&](std::int64_t k, double survival) {
    rows.push_back(make_row(spec, k, survival));
  });
  return rows;
}

inline std::vector<CompletionTableRow> completion_table(const AlbumSpec& spec,
                                                        const std::vector<std::int64_t>& ks,
                                                        Backend backend) {
  return completion_table(spec, ks, backend, PacketModel::DistinctWithinPacket,
                          BigFloatConfig::for_album(spec.total_stickers));
}

struct CurvePoint {
  std::int64_t k = 0;
  double cdf = 0.0;
};

inline std::vector<CurvePoint> cdf_curve(const AlbumSpec& spec, std::int64_t k_min,
                                         std::int64_t k_max, std::int64_t step, Backend backend,
                                         PacketModel model, const BigFloatConfig& cfg) {
  if (k_min < 0 || k_min > k_max) throw std::invalid_argument("need 0 <= k_min <= k_max");
  if (step < 1) throw std::invalid_argument("step must be >= 1");
  std::vector<std::int64_t> ks;
  for (std::int64_t k = k_min; k <= k_max; k += step) ks.push_back(k);
  std::vector<CurvePoint> points;
  points.reserve(ks.size());
  detail::sweep_survival(spec, model, backend, cfg, ks, [&](std::int64_t k, double survival) {
    points.push_back({k, 1.0 - survival});
  });
  return points;
}

inline std::vector<CurvePoint> cdf_curve(const AlbumSpec& spec, std::int64_t k_min,
                                         std::int64_t k_max, std::int64_t step, Backend backend) {
  return cdf_curve(spec, k_min, k_max, step, backend, PacketModel::DistinctWithinPacket,
                   BigFloatConfig::for_album(spec.total_stickers));
}

inline std::vector<mc::HistogramBin> histogram_bins(const std::vector<std::int64_t>& packet_counts,
                                                    std::int64_t bin_width) {
  if (packet_counts.empty()) throw std::invalid_argument("histogram needs at least one outcome");
  if (bin_width < 1) throw std::invalid_argument("bin width must be positive");
  std::map<std::int64_t, std::int64_t> frequency;
  std::int64_t smallest = packet_counts.front();
  for (std::int64_t value : packet_counts) {
    frequency[value] += 1;
    smallest = std::min(smallest, value);
  }
  return mc::detail::bin_counts(frequency, bin_width,
                                mc::detail::floor_multiple(smallest, bin_width));
}

inline std::vector<mc::HistogramBin> histogram_bins(
    const std::vector<mc::ReplicationOutcome>& outcomes, std::int64_t bin_width) {
  std::vector<std::int64_t> counts;
  counts.reserve(outcomes.size());
  for (const auto& outcome : outcomes) counts.push_back(outcome.packets);
  return histogram_bins(counts, bin_width);
}

// ---- CSV ----

inline std::string to_csv(const std::vector<CompletionTableRow>& rows) {
  std::ostringstream out;
  out << "k,probability,cost\n";
  for (const auto& row : rows) out << row.k << ',' << row.probability << ',' << row.cost_text << '\n';
  return out.str();
}

inline std::string to_csv(const std::vector<mc::HistogramBin>& bins) {
  std::ostringstream out;
  out << "lo,hi,count\n";
  for (const auto& bin : bins) out << bin.lower << ',' << bin.upper << ',' << bin.count << '\n';
  return out.str();
}

inline std::string to_csv(const std::vector<CurvePoint>& points) {
  std::ostringstream out;
  out << "k,cdf\n";
  for (const auto& point : points)
    out << point.k << ','
        << render_fixed(rational_from_double(point.cdf), kProbabilityPlaces) << '\n';
  return out.str();
}

inline std::string to_csv(const std::vector<mc::ReplicationOutcome>& outcomes) {
  std::ostringstream out;
  out << "rep,packets,duplicates\n";
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    out << i << ',' << outcomes[i].packets << ',' << outcomes[i].duplicates << '\n';
  return out.str();
}

// ---- JSON ----

using Json = nlohmann::ordered_json;

inline Json to_json(const std::vector<CompletionTableRow>& rows) {
  Json array = Json::array();
  for (const auto& row : rows) {
    Json item;
    item["k"] = row.k;
    item["probability"] = row.probability;
    item["cost"] = row.cost_text;
    if (row.near_boundary) item["near_rounding_boundary"] = true;
    array.push_back(std::move(item));
  }
  return array;
}

inline Json to_json(const std::vector<mc::HistogramBin>& bins) {
  Json array = Json::array();
  for (const auto& bin : bins)
    array.push_back(Json{{"lo", bin.lower}, {"hi", bin.upper}, {"count", bin.count}});
  return array;
}

inline Json to_json(const std::vector<CurvePoint>& points) {
  Json array = Json::array();
  for (const auto& point : points) {
    Json item;
    item["k"] = point.k;
    item["cdf"] = render_fixed(rational_from_double(point.cdf), kProbabilityPlaces);
    array.push_back(std::move(item));
  }
  return array;
}

// Batch summary. Deliberately excludes anything schedule-dependent (thread
// count), so two runs with the same seed serialize byte-identically.
inline Json to_json(const mc::SimulationConfig& config, const mc::BatchSummary& summary) {
  Json object;
  object["album_size"] = config.spec.total_stickers;
  object["packet_size"] = config.spec.packet_size;
  object["packet_price"] = render_fixed(config.spec.packet_price, kCurrencyPlaces);
  object["model"] = std::string(to_string(config.model));
  object["replications"] = summary.replications;
  object["seed"] = config.master_seed;
  object["mean_packets"] = render_fixed(summary.mean_packets, kCurrencyPlaces);
  object["mean_duplicates"] = render_fixed(summary.mean_duplicates, kCurrencyPlaces);
  object["min_packets"] = summary.min_packets;
  object["q25"] = summary.q25;
  object["q50"] = summary.q50;
  object["q75"] = summary.q75;
  object["max_packets"] = summary.max_packets;
  object["total_cost_mean"] = render_fixed(summary.total_cost_mean, kCurrencyPlaces);
  object["histogram"] = to_json(summary.histogram);
  return object;
}

}  // namespace stickers::report
