#include "mwrn/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace mwrn::protocol {

using channel::RandomStream;
using channel::Role;

FrameBits frame_bits(const SimConfig& cfg, std::uint64_t trial) {
  FrameBits bits(cfg.users, cfg.bits_per_frame);
  for (int u = 0; u < cfg.users; ++u) {
    RandomStream rs(cfg.seed, {trial, 0, Role::kFrameBits, static_cast<std::uint64_t>(u + 1)});
    std::uint8_t* row = bits.row(u);
    int t = 0;
    while (t < cfg.bits_per_frame) {
      std::uint64_t w = rs.next_u64();
      for (int b = 0; b < 64 && t < cfg.bits_per_frame; ++b, ++t) {
        row[t] = static_cast<std::uint8_t>((w >> b) & 1u);
      }
    }
  }
  return bits;
}

int df_relay_detect(cplx r, cplx h_a, cplx h_b, double noise_variance) {
  const cplx sum = h_a + h_b;
  const cplx dif = h_a - h_b;
  const double inv = 1.0 / noise_variance;
  const double l0 = std::exp(-std::norm(r - sum) * inv) + std::exp(-std::norm(r + sum) * inv);
  const double l1 = std::exp(-std::norm(r - dif) * inv) + std::exp(-std::norm(r + dif) * inv);
  return l0 >= l1 ? 0 : 1;
}

DecodedView df_extract(int observer, const std::uint8_t* own_bits, const BitMatrix& v_hat_hat) {
  const int users = v_hat_hat.rows + 1;
  const int bits = v_hat_hat.cols;
  DecodedView view;
  view.observer = observer;
  view.decoded = BitMatrix(users, bits);
  std::uint8_t* own_row = view.decoded.row(observer - 1);
  for (int t = 0; t < bits; ++t) own_row[t] = own_bits[t];

  // row-wise cumulative XOR keeps the chain cache-friendly
  for (int j = observer; j <= users - 1; ++j) { // slot j covers pair (j, j+1)
    const std::uint8_t* prev = view.decoded.row(j - 1);
    const std::uint8_t* v = v_hat_hat.row(j - 1);
    std::uint8_t* out = view.decoded.row(j);
    for (int t = 0; t < bits; ++t) out[t] = prev[t] ^ v[t];
  }
  for (int j = observer - 1; j >= 1; --j) {
    const std::uint8_t* prev = view.decoded.row(j);
    const std::uint8_t* v = v_hat_hat.row(j - 1);
    std::uint8_t* out = view.decoded.row(j - 1);
    for (int t = 0; t < bits; ++t) out[t] = prev[t] ^ v[t];
  }
  return view;
}

DecodedView af_extract(int observer, const std::uint8_t* own_bits,
                       const std::vector<std::vector<double>>& y, double alpha) {
  const int users = static_cast<int>(y.size()) + 1;
  const int bits = static_cast<int>(y.empty() ? 0 : y.front().size());
  DecodedView view;
  view.observer = observer;
  view.decoded = BitMatrix(users, bits);
  std::uint8_t* own_row = view.decoded.row(observer - 1);
  for (int t = 0; t < bits; ++t) own_row[t] = own_bits[t];

  // chain state per bit position, advanced one slot row at a time
  for (int j = observer; j <= users - 1; ++j) {
    const std::uint8_t* prev = view.decoded.row(j - 1);
    const double* yrow = y[j - 1].data();
    std::uint8_t* out = view.decoded.row(j);
    for (int t = 0; t < bits; ++t) {
      const double u = yrow[t] - alpha * modulate(prev[t]);
      out[t] = static_cast<std::uint8_t>(u < 0.0);
    }
  }
  for (int j = observer - 1; j >= 1; --j) { // slot j, known symbol is user j+1's
    const std::uint8_t* prev = view.decoded.row(j);
    const double* yrow = y[j - 1].data();
    std::uint8_t* out = view.decoded.row(j - 1);
    for (int t = 0; t < bits; ++t) {
      const double u = yrow[t] - alpha * modulate(prev[t]);
      out[t] = static_cast<std::uint8_t>(u < 0.0);
    }
  }
  return view;
}

DecodedView af_extract(int observer, const std::uint8_t* own_bits,
                       const std::vector<std::vector<cplx>>& y, double alpha,
                       const std::vector<SlotCsi>& csi) {
  const int users = static_cast<int>(y.size()) + 1;
  const int bits = static_cast<int>(y.empty() ? 0 : y.front().size());
  DecodedView view;
  view.observer = observer;
  view.decoded = BitMatrix(users, bits);
  for (int t = 0; t < bits; ++t) view.decoded.at(observer - 1, t) = own_bits[t];

  for (int j = observer; j <= users - 1; ++j) {
    const SlotCsi& c = csi[j - 1];
    const cplx known = alpha * c.g * c.h_a;
    const cplx m = alpha * c.g * c.h_b;
    const std::uint8_t* prev = view.decoded.row(j - 1);
    const cplx* yrow = y[j - 1].data();
    std::uint8_t* out = view.decoded.row(j);
    for (int t = 0; t < bits; ++t) {
      const cplx u = yrow[t] - known * modulate(prev[t]);
      out[t] = static_cast<std::uint8_t>(std::real(std::conj(m) * u) < 0.0);
    }
  }
  for (int j = observer - 1; j >= 1; --j) {
    const SlotCsi& c = csi[j - 1];
    const cplx known = alpha * c.g * c.h_b; // user j+1's side of slot j
    const cplx m = alpha * c.g * c.h_a;
    const std::uint8_t* prev = view.decoded.row(j);
    const cplx* yrow = y[j - 1].data();
    std::uint8_t* out = view.decoded.row(j - 1);
    for (int t = 0; t < bits; ++t) {
      const cplx u = yrow[t] - known * modulate(prev[t]);
      out[t] = static_cast<std::uint8_t>(std::real(std::conj(m) * u) < 0.0);
    }
  }
  return view;
}

namespace {

DecodedView simulate_frame_awgn(const SimConfig& cfg, const analytics::LinkParameters& lp,
                                const FrameBits& truth, std::uint64_t trial) {
  const int slots = channel::slots_per_phase(cfg.users);
  const int bits = cfg.bits_per_frame;
  const double sd = std::sqrt(lp.noise_variance);
  const auto obs = static_cast<std::uint64_t>(cfg.observer);

  if (cfg.protocol == Protocol::kDf) {
    BitMatrix vhh(slots, bits);
    for (int j = 1; j <= slots; ++j) {
      RandomStream mac(cfg.seed, {trial, static_cast<std::uint64_t>(j), Role::kMacNoise, 0});
      RandomStream bc(cfg.seed, {trial, static_cast<std::uint64_t>(j), Role::kBcNoise, obs});
      const std::uint8_t* wa = truth.row(j - 1);
      const std::uint8_t* wb = truth.row(j);
      std::uint8_t* out = vhh.row(j - 1);
      for (int t = 0; t < bits; ++t) {
        const double r = modulate(wa[t]) + modulate(wb[t]) + sd * mac.next_gaussian();
        const int v_hat = df_relay_detect(r, lp.gamma_r);
        const double y = modulate(v_hat) + sd * bc.next_gaussian();
        out[t] = static_cast<std::uint8_t>(df_user_detect(y, lp.gamma));
      }
    }
    return df_extract(cfg.observer, truth.row(cfg.observer - 1), vhh);
  }

  std::vector<std::vector<double>> y(slots, std::vector<double>(bits));
  for (int j = 1; j <= slots; ++j) {
    RandomStream mac(cfg.seed, {trial, static_cast<std::uint64_t>(j), Role::kMacNoise, 0});
    RandomStream bc(cfg.seed, {trial, static_cast<std::uint64_t>(j), Role::kBcNoise, obs});
    const std::uint8_t* wa = truth.row(j - 1);
    const std::uint8_t* wb = truth.row(j);
    double* out = y[j - 1].data();
    for (int t = 0; t < bits; ++t) {
      const double r = modulate(wa[t]) + modulate(wb[t]) + sd * mac.next_gaussian();
      out[t] = af_broadcast(r, lp.alpha, sd * bc.next_gaussian());
    }
  }
  return af_extract(cfg.observer, truth.row(cfg.observer - 1), y, lp.alpha);
}

DecodedView simulate_frame_rayleigh(const SimConfig& cfg, const analytics::LinkParameters& lp,
                                    const FrameBits& truth, std::uint64_t trial) {
  const int slots = channel::slots_per_phase(cfg.users);
  const int bits = cfg.bits_per_frame;
  const double nv = lp.noise_variance;
  const auto obs = static_cast<std::uint64_t>(cfg.observer);

  std::vector<SlotCsi> csi(slots);
  for (int j = 1; j <= slots; ++j) {
    RandomStream mac(cfg.seed, {trial, static_cast<std::uint64_t>(j), Role::kMacChannel, 0});
    csi[j - 1].h_a = channel::rayleigh_coefficient(mac);
    csi[j - 1].h_b = channel::rayleigh_coefficient(mac);
    csi[j - 1].g = channel::bc_coefficient(cfg, trial, j, cfg.observer);
  }

  if (cfg.protocol == Protocol::kDf) {
    BitMatrix vhh(slots, bits);
    for (int j = 1; j <= slots; ++j) {
      RandomStream mac(cfg.seed, {trial, static_cast<std::uint64_t>(j), Role::kMacNoise, 0});
      RandomStream bc(cfg.seed, {trial, static_cast<std::uint64_t>(j), Role::kBcNoise, obs});
      const SlotCsi& c = csi[j - 1];
      const std::uint8_t* wa = truth.row(j - 1);
      const std::uint8_t* wb = truth.row(j);
      std::uint8_t* out = vhh.row(j - 1);
      for (int t = 0; t < bits; ++t) {
        const cplx r = mac_slot(modulate(wa[t]), modulate(wb[t]), c.h_a, c.h_b,
                                mac.next_cgaussian(nv));
        const int v_hat = df_relay_detect(r, c.h_a, c.h_b, nv);
        const cplx y = c.g * modulate(v_hat) + bc.next_cgaussian(nv);
        out[t] = static_cast<std::uint8_t>(df_user_detect(y, c.g));
      }
    }
    return df_extract(cfg.observer, truth.row(cfg.observer - 1), vhh);
  }

  std::vector<std::vector<cplx>> y(slots, std::vector<cplx>(bits));
  for (int j = 1; j <= slots; ++j) {
    RandomStream mac(cfg.seed, {trial, static_cast<std::uint64_t>(j), Role::kMacNoise, 0});
    RandomStream bc(cfg.seed, {trial, static_cast<std::uint64_t>(j), Role::kBcNoise, obs});
    const SlotCsi& c = csi[j - 1];
    const std::uint8_t* wa = truth.row(j - 1);
    const std::uint8_t* wb = truth.row(j);
    cplx* out = y[j - 1].data();
    for (int t = 0; t < bits; ++t) {
      const cplx r = mac_slot(modulate(wa[t]), modulate(wb[t]), c.h_a, c.h_b,
                              mac.next_cgaussian(nv));
      out[t] = af_broadcast(r, lp.alpha, c.g, bc.next_cgaussian(nv));
    }
  }
  return af_extract(cfg.observer, truth.row(cfg.observer - 1), y, lp.alpha, csi);
}

} // namespace

DecodedView simulate_frame(const SimConfig& cfg, double snr_db, std::uint64_t trial) {
  validate(cfg);
  const analytics::LinkParameters lp =
      analytics::link_parameters_from_rho(snr_db_to_rho(snr_db));
  const FrameBits truth = frame_bits(cfg, trial);
  if (cfg.channel == ChannelModel::kAwgn) return simulate_frame_awgn(cfg, lp, truth, trial);
  return simulate_frame_rayleigh(cfg, lp, truth, trial);
}

} // namespace mwrn::protocol
