#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mwrn/config.hpp"
#include "mwrn/protocol.hpp"

namespace mwrn::experiment {

/// Counts of bit positions at which the observer decoded exactly k other
/// users wrongly; `total` is the number of (frame, bit index) opportunities.
struct ErrorEventHistogram {
  std::vector<std::uint64_t> counts; // index k = 0..L-1
  std::uint64_t total = 0;

  explicit ErrorEventHistogram(int users = 2)
      : counts(static_cast<std::size_t>(users), 0) {}
  void merge(const ErrorEventHistogram& other);
};

ErrorEventHistogram tally_events(const protocol::FrameBits& truth,
                                 const protocol::DecodedView& view, int observer);
void tally_events_into(const protocol::FrameBits& truth, const protocol::DecodedView& view,
                       int observer, ErrorEventHistogram& hist);

/// (1/(L-1)) sum_k k counts[k] / total; identical to wrong-bits over
/// total decoded bits.  Throws on an empty histogram.
double empirical_average_ber(const ErrorEventHistogram& hist, int users);

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// 95% Wilson score interval for successes out of n Bernoulli trials.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t n);

struct PerEventOrder {
  int k = 1;
  double simulated = 0.0;
  std::optional<double> analytic_exact; // k <= 2, AWGN only
  double analytic_asymptotic = 0.0;
};

struct BerPoint {
  double snr_db = 0.0;
  double simulated_avg_ber = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double analytic_avg_ber = 0.0;
  bool analytic_exact = false; // L == 2, where the scaling is degenerate
  std::vector<PerEventOrder> per_k;
  ErrorEventHistogram histogram;
};

/// Runs cfg.trials frames per SNR point, merging integer histograms in a
/// thread-count-independent way.  threads = 0 reads MWRN_THREADS, falling
/// back to the hardware concurrency.
std::vector<BerPoint> run_sweep(const SimConfig& cfg, int threads = 0);

int resolve_thread_count(int requested);

/// Exact distribution of the error-event order k = 0..L-1 seen by one
/// observer when every network-coded pair bit flips independently with
/// probability p.  Enumerates all 2^(L-1) flip patterns; users <= 14.
std::vector<double> df_enumeration_oracle(int users, double p, int observer);

/// Exact k distribution for the self-interference chain: a decision errs
/// with probability p after a correct step and p_prime after an erroneous
/// one.  Dynamic program over both chains, convolved.
std::vector<double> af_markov_oracle(int users, double p, double p_prime, int observer);

} // namespace mwrn::experiment
