#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mwrn/config.hpp"
#include "mwrn/experiment.hpp"

namespace mwrn::csv {

/// One emitted data cell; the column set and order are fixed.
struct OutputRow {
  std::optional<double> snr_db;
  int users = 0;
  std::string protocol;
  std::string channel;
  std::string metric; // avg_ber | p_k | penalty_db
  std::optional<int> k;
  std::string source; // simulated | analytic_exact | analytic_asymptotic | paper_verbatim
  double value = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::uint64_t seed = 0;
};

inline constexpr const char* kHeader =
    "snr_db,users,protocol,channel,metric,k,source,value,ci_low,ci_high,seed";

std::string format_row(const OutputRow& row);
OutputRow parse_row(const std::string& line);

/// Rows for one sweep: simulated and analytic avg_ber, per-k probabilities
/// and the closing AF-vs-DF high-SNR penalty constant.
std::vector<OutputRow> sweep_rows(const SimConfig& cfg,
                                  const std::vector<experiment::BerPoint>& points);

/// Comment header (config echo + version) followed by the column header and
/// all rows.
void write_csv(std::ostream& os, const SimConfig& cfg, const std::vector<OutputRow>& rows);

std::string config_echo(const SimConfig& cfg);

} // namespace mwrn::csv
