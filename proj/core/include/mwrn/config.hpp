#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mwrn {

inline constexpr const char* kVersion = "0.1.0";

enum class Protocol { kDf, kAf };
enum class ChannelModel { kAwgn, kRayleigh };

const char* to_string(Protocol p);
const char* to_string(ChannelModel c);

/// Full description of one Monte Carlo experiment.
struct SimConfig {
  int users = 10;                  // L
  int bits_per_frame = 10000;      // T
  std::vector<double> snr_grid_db; // per bit per user, strictly increasing
  Protocol protocol = Protocol::kDf;
  ChannelModel channel = ChannelModel::kAwgn;
  int trials = 100;                // frames per SNR point
  std::uint64_t seed = 1;
  int observer = 1;                // user whose decoding is tallied
  bool bc_reuse_mac_channel = false;
};

/// Throws std::invalid_argument naming the offending key.
void validate(const SimConfig& cfg);

/// "start:step:stop" in dB (single value allowed).
std::vector<double> parse_snr_grid(const std::string& text);

double snr_db_to_rho(double snr_db);

} // namespace mwrn
