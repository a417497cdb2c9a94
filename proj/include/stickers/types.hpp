// Core domain types: album instance, packet models, precision configuration.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stickers/numeric.hpp"

namespace stickers {

// Sampling discipline for a packet of stickers.
enum class PacketModel {
  DistinctWithinPacket,  // a packet is a uniform n-subset of the N types
  IidWithReplacement,    // a packet is n independent uniform draws
};

inline std::string_view to_string(PacketModel model) {
  return model == PacketModel::DistinctWithinPacket ? "distinct" : "iid";
}

inline PacketModel packet_model_from_string(std::string_view name) {
  if (name == "distinct") return PacketModel::DistinctWithinPacket;
  if (name == "iid") return PacketModel::IidWithReplacement;
  throw std::invalid_argument("unknown packet model: " + std::string(name));
}

// One album instance: N sticker types, packets of n, price per packet.
struct AlbumSpec {
  int total_stickers = 670;
  int packet_size = 5;
  Rational packet_price = 4;

  AlbumSpec() = default;
  AlbumSpec(int total, int per_packet, Rational price = 4)
      : total_stickers(total), packet_size(per_packet), packet_price(std::move(price)) {
    if (total_stickers < 1) throw std::invalid_argument("album size must be positive");
    if (packet_size < 1 || packet_size > total_stickers)
      throw std::invalid_argument("packet size must be in [1, album size]");
    if (packet_price < 0) throw std::invalid_argument("packet price must be non-negative");
  }

  // Minimum packets that can cover the album: ceil(N/n).
  std::int64_t coverage_bound() const {
    return (static_cast<std::int64_t>(total_stickers) + packet_size - 1) / packet_size;
  }
};

// Working precision for the arbitrary-precision float evaluations.
// The alternating sums need precision_bits >= N + 64: every term is below
// C(N, N/2) < 2^N, so N+64 bits keep the absolute rounding error of the
// whole sum under ~2^-54.
struct BigFloatConfig {
  long precision_bits = 256;

  BigFloatConfig() = default;
  explicit BigFloatConfig(long bits) : precision_bits(bits) {
    if (bits < 2) throw std::invalid_argument("precision_bits must be >= 2");
  }

  static BigFloatConfig for_album(int total_stickers) {
    return BigFloatConfig(std::max(256L, static_cast<long>(total_stickers) + 64));
  }

  bool sufficient_for(int total_stickers) const {
    return precision_bits >= static_cast<long>(total_stickers) + 64;
  }
};

inline void require_precision(const BigFloatConfig& cfg, int total_stickers) {
  if (!cfg.sufficient_for(total_stickers))
    throw std::invalid_argument("precision_bits must be >= album size + 64 for alternating sums");
}

// An exactly-represented probability with decimal rendering on demand.
class ExactProbability {
 public:
  explicit ExactProbability(Rational value) : value_(std::move(value)) {
    if (value_ < 0 || value_ > 1)
      throw std::invalid_argument("probability outside [0,1]");
  }
  const Rational& value() const { return value_; }
  std::string decimal(int places) const { return render_fixed(value_, places); }
  double to_double() const { return stickers::to_double(value_); }

 private:
  Rational value_;
};

enum class DistributionMethod { InclusionExclusion, DynamicProgram };

inline std::string_view to_string(DistributionMethod m) {
  return m == DistributionMethod::InclusionExclusion ? "inclusion-exclusion" : "dynamic-program";
}

// Survival values P(T>k) over a set of packet counts, with the expectation.
struct CompletionDistribution {
  AlbumSpec spec;
  PacketModel model = PacketModel::DistinctWithinPacket;
  DistributionMethod method = DistributionMethod::InclusionExclusion;
  std::map<std::int64_t, double> survival;
  double expectation = 0.0;
};

}  // namespace stickers
