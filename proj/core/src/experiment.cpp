#include "mwrn/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "mwrn/analytics.hpp"

namespace mwrn::experiment {

void ErrorEventHistogram::merge(const ErrorEventHistogram& other) {
  if (counts.size() < other.counts.size()) counts.resize(other.counts.size(), 0);
  for (std::size_t k = 0; k < other.counts.size(); ++k) counts[k] += other.counts[k];
  total += other.total;
}

void tally_events_into(const protocol::FrameBits& truth, const protocol::DecodedView& view,
                       int observer, ErrorEventHistogram& hist) {
  if (truth.rows != view.decoded.rows || truth.cols != view.decoded.cols)
    throw std::invalid_argument("tally_events: dimension mismatch");
  const int users = truth.rows;
  const int bits = truth.cols;
  if (hist.counts.size() < static_cast<std::size_t>(users))
    hist.counts.resize(static_cast<std::size_t>(users), 0);
  std::vector<std::uint16_t> wrong(static_cast<std::size_t>(bits), 0);
  for (int u = 0; u < users; ++u) {
    if (u == observer - 1) continue;
    const std::uint8_t* tr = truth.row(u);
    const std::uint8_t* dr = view.decoded.row(u);
    for (int t = 0; t < bits; ++t) wrong[static_cast<std::size_t>(t)] += tr[t] != dr[t];
  }
  for (int t = 0; t < bits; ++t) ++hist.counts[wrong[static_cast<std::size_t>(t)]];
  hist.total += static_cast<std::uint64_t>(bits);
}

ErrorEventHistogram tally_events(const protocol::FrameBits& truth,
                                 const protocol::DecodedView& view, int observer) {
  ErrorEventHistogram hist(truth.rows);
  tally_events_into(truth, view, observer, hist);
  return hist;
}

double empirical_average_ber(const ErrorEventHistogram& hist, int users) {
  if (hist.total == 0) throw std::invalid_argument("empirical_average_ber: empty histogram");
  double weighted = 0.0;
  for (std::size_t k = 1; k < hist.counts.size(); ++k)
    weighted += static_cast<double>(k) * static_cast<double>(hist.counts[k]);
  return weighted / (static_cast<double>(hist.total) * (users - 1));
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t n) {
  if (n == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054; // 95%
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double radius = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  WilsonInterval out{std::max(0.0, center - radius), std::min(1.0, center + radius)};
  if (successes == 0) out.low = 0.0; // center and radius agree only up to rounding
  if (successes == n) out.high = 1.0;
  return out;
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MWRN_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

void attach_analytics(const SimConfig& cfg, double rho, BerPoint& point) {
  using namespace analytics;
  const int L = cfg.users;
  const TwrnBaselines base = twrn_baselines(link_parameters_from_rho(rho));
  const bool awgn = cfg.channel == ChannelModel::kAwgn;
  const bool df = cfg.protocol == Protocol::kDf;

  double p_fade = 0.0;
  FadingBaselines fade_af{};
  if (!awgn) {
    if (df) {
      p_fade = fading_df_bound(rho).value;
    } else {
      fade_af = fading_af_baselines(rho, 200000, cfg.seed ^ 0x5eedfade5eedfadeULL);
    }
  }

  if (awgn) {
    point.analytic_avg_ber = average_ber(L, rho, cfg.protocol);
  } else if (df) {
    point.analytic_avg_ber = std::min(1.0, 0.5 * L * p_fade);
  } else {
    point.analytic_avg_ber =
        std::min(1.0, af_average_ber_from_baselines(L, fade_af.p_af, fade_af.p_af_prime));
  }
  point.analytic_exact = L == 2;

  point.per_k.resize(static_cast<std::size_t>(L - 1));
  for (int k = 1; k <= L - 1; ++k) {
    PerEventOrder& row = point.per_k[static_cast<std::size_t>(k - 1)];
    row.k = k;
    const std::uint64_t c =
        static_cast<std::size_t>(k) < point.histogram.counts.size()
            ? point.histogram.counts[static_cast<std::size_t>(k)]
            : 0;
    row.simulated =
        point.histogram.total ? static_cast<double>(c) / static_cast<double>(point.histogram.total)
                              : 0.0;
    if (awgn && k <= 2) {
      row.analytic_exact = df ? df_event_exact(L, base.p_df, cfg.observer, k)
                              : af_event_exact(L, base.p_af, base.p_af_prime, cfg.observer, k);
    }
    if (df) {
      row.analytic_asymptotic = df_event_asymptotic(L, awgn ? base.p_df : p_fade);
    } else if (awgn) {
      row.analytic_asymptotic = af_event_reduced_at(L, base.p_af, k);
    } else {
      row.analytic_asymptotic = af_event_asymptotic(L, fade_af.p_af, fade_af.p_af_prime, k);
    }
  }
}

} // namespace

std::vector<BerPoint> run_sweep(const SimConfig& cfg, int threads) {
  validate(cfg);
  const int workers = std::min(resolve_thread_count(threads), cfg.trials);
  std::vector<BerPoint> points;
  points.reserve(cfg.snr_grid_db.size());

  for (double snr_db : cfg.snr_grid_db) {
    std::vector<ErrorEventHistogram> parts(static_cast<std::size_t>(workers),
                                           ErrorEventHistogram(cfg.users));
    auto work = [&](int w) {
      ErrorEventHistogram& local = parts[static_cast<std::size_t>(w)];
      for (int trial = w; trial < cfg.trials; trial += workers) {
        const auto id = static_cast<std::uint64_t>(trial);
        const protocol::FrameBits truth = protocol::frame_bits(cfg, id);
        const protocol::DecodedView view = protocol::simulate_frame(cfg, snr_db, id);
        tally_events_into(truth, view, cfg.observer, local);
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }

    BerPoint point;
    point.snr_db = snr_db;
    point.histogram = ErrorEventHistogram(cfg.users);
    for (const auto& part : parts) point.histogram.merge(part);

    point.simulated_avg_ber = empirical_average_ber(point.histogram, cfg.users);
    std::uint64_t wrong = 0;
    for (std::size_t k = 1; k < point.histogram.counts.size(); ++k)
      wrong += static_cast<std::uint64_t>(k) * point.histogram.counts[k];
    const std::uint64_t n = point.histogram.total * static_cast<std::uint64_t>(cfg.users - 1);
    const WilsonInterval ci = wilson_interval(wrong, n);
    point.ci_low = ci.low;
    point.ci_high = ci.high;
    attach_analytics(cfg, snr_db_to_rho(snr_db), point);
    points.push_back(std::move(point));
  }
  return points;
}

std::vector<double> df_enumeration_oracle(int users, double p, int observer) {
  if (users < 2 || users > 14) throw std::domain_error("enumeration oracle needs 2 <= users <= 14");
  if (p < 0.0 || p > 1.0) throw std::domain_error("p must be in [0, 1]");
  if (observer < 1 || observer > users) throw std::domain_error("observer out of range");
  const int pairs = users - 1;
  std::vector<double> dist(static_cast<std::size_t>(users), 0.0);
  for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
    double w = 1.0;
    for (int j = 0; j < pairs; ++j) w *= (mask >> j) & 1u ? p : 1.0 - p;
    int k = 0;
    std::uint32_t acc = 0;
    for (int j = observer; j <= pairs; ++j) { // downward: users observer+1 .. L
      acc ^= (mask >> (j - 1)) & 1u;
      k += static_cast<int>(acc);
    }
    acc = 0;
    for (int j = observer - 1; j >= 1; --j) { // upward: users observer-1 .. 1
      acc ^= (mask >> (j - 1)) & 1u;
      k += static_cast<int>(acc);
    }
    dist[static_cast<std::size_t>(k)] += w;
  }
  return dist;
}

namespace {

// error-count distribution of an n-step chain: p after a correct step,
// p_prime after an erroneous step, starting correct
std::vector<double> markov_chain_distribution(int n, double p, double p_prime) {
  std::vector<double> ok(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> bad(static_cast<std::size_t>(n) + 1, 0.0);
  ok[0] = 1.0;
  for (int step = 0; step < n; ++step) {
    std::vector<double> next_ok(ok.size(), 0.0);
    std::vector<double> next_bad(ok.size(), 0.0);
    for (std::size_t k = 0; k <= static_cast<std::size_t>(step); ++k) {
      next_bad[k + 1] += ok[k] * p + bad[k] * p_prime;
      next_ok[k] += ok[k] * (1.0 - p) + bad[k] * (1.0 - p_prime);
    }
    ok.swap(next_ok);
    bad.swap(next_bad);
  }
  std::vector<double> dist(ok.size());
  for (std::size_t k = 0; k < dist.size(); ++k) dist[k] = ok[k] + bad[k];
  return dist;
}

} // namespace

std::vector<double> af_markov_oracle(int users, double p, double p_prime, int observer) {
  if (users < 2) throw std::domain_error("users must be >= 2");
  if (p < 0.0 || p > 1.0 || p_prime < 0.0 || p_prime > 1.0)
    throw std::domain_error("probabilities must be in [0, 1]");
  if (observer < 1 || observer > users) throw std::domain_error("observer out of range");
  const std::vector<double> down = markov_chain_distribution(users - observer, p, p_prime);
  const std::vector<double> up = markov_chain_distribution(observer - 1, p, p_prime);
  std::vector<double> dist(static_cast<std::size_t>(users), 0.0);
  for (std::size_t a = 0; a < down.size(); ++a)
    for (std::size_t b = 0; b < up.size(); ++b) dist[a + b] += down[a] * up[b];
  return dist;
}

} // namespace mwrn::experiment
