#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mwrn/analytics.hpp"
#include "mwrn/channel.hpp"
#include "mwrn/config.hpp"

namespace mwrn::protocol {

using cplx = std::complex<double>;

/// Row-major bit matrix, rows are users 1..L (stored 0-based).
struct BitMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;

  BitMatrix() = default;
  BitMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}
  std::uint8_t& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::uint8_t at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  const std::uint8_t* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
  std::uint8_t* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
};

using FrameBits = BitMatrix; // ground truth, row u-1 = user u's bits

struct DecodedView {
  int observer = 1;
  BitMatrix decoded; // L x T, row observer-1 equals the truth row
};

/// Per-trial source bits, a pure function of (seed, trial).
FrameBits frame_bits(const SimConfig& cfg, std::uint64_t trial);

/// Antipodal map: 0 -> +1, 1 -> -1, so the XOR of two bits is the sign of
/// the product of their symbols.
inline double modulate(int bit) { return 1.0 - 2.0 * static_cast<double>(bit); }

// --- single-sample operations -------------------------------------------

inline double mac_slot(double x_a, double x_b, double n1) { return x_a + x_b + n1; }
inline cplx mac_slot(double x_a, double x_b, cplx h_a, cplx h_b, cplx n1) {
  return h_a * x_a + h_b * x_b + n1;
}

/// Relay decision on the superposed signal: network bit 0 iff |r| >= gamma_r.
inline int df_relay_detect(double r, double gamma_r) {
  return static_cast<int>(std::abs(r) < gamma_r);
}

/// Fading relay decision: two-hypothesis ML with the likelihoods of both
/// symbol pairs consistent with each network bit summed.
int df_relay_detect(cplx r, cplx h_a, cplx h_b, double noise_variance);

/// User decision on the re-broadcast bit: 0 iff y >= gamma (0 is sent as +1).
inline int df_user_detect(double y, double gamma) { return static_cast<int>(y < gamma); }

/// Fading user decision: matched filter sign with known BC coefficient.
inline int df_user_detect(cplx y, cplx g) {
  return static_cast<int>(std::real(std::conj(g) * y) < 0.0);
}

inline double af_broadcast(double r, double alpha, double n2) { return alpha * r + n2; }
inline cplx af_broadcast(cplx r, double alpha, cplx g, cplx n2) { return g * alpha * r + n2; }

/// XOR-chain extraction: decodes every other user from the observer's own
/// bits and the detected network-coded bits, downward then upward.
DecodedView df_extract(int observer, const std::uint8_t* own_bits, const BitMatrix& v_hat_hat);

/// AF chain csi for one slot as seen by one observer.
struct SlotCsi {
  cplx h_a{1.0, 0.0};
  cplx h_b{1.0, 0.0};
  cplx g{1.0, 0.0};
};

/// Self-interference cancellation chain, AWGN: residual u = y - alpha * xhat
/// decides the next user by its sign.
DecodedView af_extract(int observer, const std::uint8_t* own_bits,
                       const std::vector<std::vector<double>>& y, double alpha);

/// Fading variant with perfect CSI: residual u = y - alpha g h_known xhat,
/// detected through the matched filter alpha g h_next.
DecodedView af_extract(int observer, const std::uint8_t* own_bits,
                       const std::vector<std::vector<cplx>>& y, double alpha,
                       const std::vector<SlotCsi>& csi);

/// One full frame: L-1 MAC slots, relay processing, L-1 BC slots and the
/// observer's extraction.  Deterministic given (cfg.seed, trial).
DecodedView simulate_frame(const SimConfig& cfg, double snr_db, std::uint64_t trial);

} // namespace mwrn::protocol
