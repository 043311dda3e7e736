#include "mwrn/channel.hpp"

namespace mwrn::channel {

SlotChannel slot_channel(const SimConfig& cfg, std::uint64_t trial, int slot) {
  SlotChannel ch;
  ch.g.assign(static_cast<std::size_t>(cfg.users) + 1, cplx{1.0, 0.0});
  if (cfg.channel == ChannelModel::kAwgn) return ch;

  RandomStream mac(cfg.seed, {trial, static_cast<std::uint64_t>(slot), Role::kMacChannel, 0});
  ch.h_a = rayleigh_coefficient(mac);
  ch.h_b = rayleigh_coefficient(mac);
  for (int u = 1; u <= cfg.users; ++u)
    ch.g[static_cast<std::size_t>(u)] = bc_coefficient(cfg, trial, slot, u);
  return ch;
}

cplx bc_coefficient(const SimConfig& cfg, std::uint64_t trial, int slot, int user) {
  if (cfg.channel == ChannelModel::kAwgn) return {1.0, 0.0};
  if (cfg.bc_reuse_mac_channel) {
    RandomStream mac(cfg.seed, {trial, static_cast<std::uint64_t>(slot), Role::kMacChannel, 0});
    return rayleigh_coefficient(mac); // h_a of the slot, reciprocal reading
  }
  RandomStream bc(cfg.seed, {trial, static_cast<std::uint64_t>(slot), Role::kBcChannel,
                             static_cast<std::uint64_t>(user)});
  return rayleigh_coefficient(bc);
}

} // namespace mwrn::channel
