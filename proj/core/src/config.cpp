#include "mwrn/config.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mwrn {

const char* to_string(Protocol p) { return p == Protocol::kDf ? "df" : "af"; }
const char* to_string(ChannelModel c) { return c == ChannelModel::kAwgn ? "awgn" : "rayleigh"; }

void validate(const SimConfig& cfg) {
  if (cfg.users < 2) throw std::invalid_argument("users: must be >= 2");
  if (cfg.bits_per_frame < 1) throw std::invalid_argument("bits-per-frame: must be >= 1");
  if (cfg.trials < 1) throw std::invalid_argument("frames: must be >= 1");
  if (cfg.observer < 1 || cfg.observer > cfg.users)
    throw std::invalid_argument("observer: must be in [1, users]");
  if (cfg.snr_grid_db.empty()) throw std::invalid_argument("snr: grid must be non-empty");
  for (std::size_t i = 1; i < cfg.snr_grid_db.size(); ++i)
    if (cfg.snr_grid_db[i] <= cfg.snr_grid_db[i - 1])
      throw std::invalid_argument("snr: grid must be strictly increasing");
}

std::vector<double> parse_snr_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument("");
      parts.push_back(v);
    } catch (...) {
      throw std::invalid_argument("snr: expected start:step:stop, got '" + text + "'");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw std::invalid_argument("snr: expected start:step:stop, got '" + text + "'");
  double start = parts[0], step = parts[1], stop = parts[2];
  if (step <= 0) throw std::invalid_argument("snr: step must be > 0");
  if (stop < start) throw std::invalid_argument("snr: stop must be >= start");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double v = start + step * i;
    if (v > stop + 1e-9) break;
    grid.push_back(v);
  }
  return grid;
}

double snr_db_to_rho(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

} // namespace mwrn
