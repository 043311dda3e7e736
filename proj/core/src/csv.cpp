#include "mwrn/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mwrn/analytics.hpp"

namespace mwrn::csv {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_double(*v) : ""; }

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

} // namespace

std::string format_row(const OutputRow& row) {
  std::ostringstream os;
  os << fmt_opt(row.snr_db) << ',' << row.users << ',' << row.protocol << ',' << row.channel
     << ',' << row.metric << ',' << (row.k ? std::to_string(*row.k) : "") << ',' << row.source
     << ',' << fmt_double(row.value) << ',' << fmt_opt(row.ci_low) << ',' << fmt_opt(row.ci_high)
     << ',' << row.seed;
  return os.str();
}

OutputRow parse_row(const std::string& line) {
  const std::vector<std::string> f = split_fields(line);
  if (f.size() != 11) throw std::invalid_argument("csv row: expected 11 fields");
  OutputRow row;
  if (!f[0].empty()) row.snr_db = std::stod(f[0]);
  row.users = std::stoi(f[1]);
  row.protocol = f[2];
  row.channel = f[3];
  row.metric = f[4];
  if (!f[5].empty()) row.k = std::stoi(f[5]);
  row.source = f[6];
  row.value = std::stod(f[7]);
  if (!f[8].empty()) row.ci_low = std::stod(f[8]);
  if (!f[9].empty()) row.ci_high = std::stod(f[9]);
  row.seed = std::stoull(f[10]);
  return row;
}

std::vector<OutputRow> sweep_rows(const SimConfig& cfg,
                                  const std::vector<experiment::BerPoint>& points) {
  std::vector<OutputRow> rows;
  OutputRow base;
  base.users = cfg.users;
  base.protocol = to_string(cfg.protocol);
  base.channel = to_string(cfg.channel);
  base.seed = cfg.seed;

  for (const auto& point : points) {
    OutputRow sim = base;
    sim.snr_db = point.snr_db;
    sim.metric = "avg_ber";
    sim.source = "simulated";
    sim.value = point.simulated_avg_ber;
    sim.ci_low = point.ci_low;
    sim.ci_high = point.ci_high;
    rows.push_back(sim);

    OutputRow ana = base;
    ana.snr_db = point.snr_db;
    ana.metric = "avg_ber";
    ana.source = point.analytic_exact ? "analytic_exact" : "analytic_asymptotic";
    ana.value = point.analytic_avg_ber;
    rows.push_back(ana);

    for (const auto& pk : point.per_k) {
      OutputRow sk = base;
      sk.snr_db = point.snr_db;
      sk.metric = "p_k";
      sk.k = pk.k;
      sk.source = "simulated";
      sk.value = pk.simulated;
      rows.push_back(sk);
      if (pk.analytic_exact) {
        OutputRow ek = sk;
        ek.source = "analytic_exact";
        ek.value = *pk.analytic_exact;
        rows.push_back(ek);
      }
      OutputRow ak = sk;
      ak.source = "analytic_asymptotic";
      ak.value = pk.analytic_asymptotic;
      rows.push_back(ak);
    }
  }

  OutputRow penalty = base;
  penalty.metric = "penalty_db";
  penalty.source = "analytic_exact";
  penalty.value = 10.0 * std::log10(3.0);
  rows.push_back(penalty);
  return rows;
}

std::string config_echo(const SimConfig& cfg) {
  std::ostringstream os;
  os << "users=" << cfg.users << " protocol=" << to_string(cfg.protocol)
     << " channel=" << to_string(cfg.channel) << " snr=";
  for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i)
    os << (i ? "," : "") << fmt_double(cfg.snr_grid_db[i]);
  os << " frames=" << cfg.trials << " bits-per-frame=" << cfg.bits_per_frame
     << " seed=" << cfg.seed << " observer=" << cfg.observer
     << " bc-reuse-mac-channel=" << (cfg.bc_reuse_mac_channel ? 1 : 0);
  return os.str();
}

void write_csv(std::ostream& os, const SimConfig& cfg, const std::vector<OutputRow>& rows) {
  os << "# mwrn " << kVersion << "\n";
  os << "# " << config_echo(cfg) << "\n";
  os << kHeader << "\n";
  for (const auto& row : rows) os << format_row(row) << "\n";
}

} // namespace mwrn::csv
