// What does completing the album cost? Three routes to the same answer:
// the closed form, the absorbing-chain oracle, and a seeded simulation.
#include <iostream>

#include "stickers/stickers.hpp"

int main() {
  using namespace stickers;

  AlbumSpec album(670, 5, parse_decimal("4"));

  Rational closed_form = exact::expected_packets_rational(album);
  std::cout << "closed form (distinct packets):   E(T) = " << render_fixed(closed_form, 2)
            << " packets\n";

  auto chain = dp::expectation_dp(album, PacketModel::DistinctWithinPacket);
  std::cout << "absorbing chain, distinct model:  E(T) = "
            << render_fixed(rational_from_double(chain.expectation), 2) << " packets\n";

  auto chain_iid = dp::expectation_dp(album, PacketModel::IidWithReplacement);
  std::cout << "absorbing chain, iid model:       E(T) = "
            << render_fixed(rational_from_double(chain_iid.expectation), 2) << " packets\n";

  mc::SimulationConfig sim;
  sim.spec = album;
  sim.model = PacketModel::IidWithReplacement;
  sim.replications = 20000;
  sim.master_seed = 20220801;
  auto summary = mc::simulate_batch(sim);
  std::cout << "simulated mean over " << summary.replications
            << " runs (iid): T = " << render_fixed(summary.mean_packets, 2) << " packets\n";

  Rational displayed(round_scaled_half_even(closed_form, 2), pow10(2));
  std::cout << "\nmean outlay at " << render_fixed(album.packet_price, 2)
            << " per packet: " << render_fixed(album.packet_price * displayed, 2) << "\n";
  std::cout << "quartiles (distinct): "
            << dp::quantile_dp(album, PacketModel::DistinctWithinPacket, 0.25) << " / "
            << dp::quantile_dp(album, PacketModel::DistinctWithinPacket, 0.5) << " / "
            << dp::quantile_dp(album, PacketModel::DistinctWithinPacket, 0.75) << " packets\n";
  return 0;
}
