#pragma once

#include <cstdint>

#include "mwrn/config.hpp"

namespace mwrn::analytics {

/// Gaussian tail probability, erfc(x / sqrt(2)) / 2.
double q_function(double x);

struct LinkParameters {
  double rho;            // linear SNR per bit per user
  double noise_variance; // per-link noise variance, equals 1 / (2 rho)
  double alpha;          // AF amplification keeping unit relay power
  double gamma_r;        // relay MAP threshold on |r|
  double gamma;          // user MAP threshold on y
};

/// Derives rho and both detection thresholds from the user count and the
/// base noise density.  Throws std::domain_error on users < 2 or n0 <= 0.
LinkParameters link_parameters(int users, double n0);
LinkParameters link_parameters_from_rho(double rho);

struct TwrnBaselines {
  double p_df;       // pairwise bit error via relay detect + re-broadcast
  double p_af;       // pairwise bit error via amplify-and-forward
  double p_af_prime; // AF error given the previous extraction was wrong
};

TwrnBaselines twrn_baselines(const LinkParameters& lp);

struct EventProbability {
  double value;
  bool exact; // closed-form combinatorial value vs high-SNR approximation
};

/// Probability that observer i in an L-user network decodes exactly k other
/// users' bits wrongly at one bit position.  Exact for k <= 2, high-SNR
/// approximation for k >= 3.
EventProbability df_event_probability(int users, double rho, int observer, int k);
EventProbability af_event_probability(int users, double rho, int observer, int k);

/// Reduced AF approximation (L - k + 1) / 2^k * P_AF.
double af_event_probability_reduced(int users, double rho, int k);

// Combinatorial layer at given per-pair error probabilities.  Exposed for
// oracle validation and for the fading path, which reuses the same chain
// structure with conditional baselines.
double df_event_exact(int users, double p, int observer, int k);       // k in {1, 2}
double df_event_asymptotic(int users, double p);                       // k-independent
double af_event_exact(int users, double p, double p_prime, int observer, int k);
double af_event_asymptotic(int users, double p, double p_prime, int k); // dominant-run form
double af_event_reduced_at(int users, double p, int k);

/// Mean bit error rate across the L-1 decoded users; high-SNR closed forms,
/// clamped to [0, 1].
double average_ber(int users, double rho, Protocol protocol);

/// Coefficient c in avg = c * P_AF: event-order-weighted sum of the reduced
/// per-k approximation.
double af_average_coefficient(int users);
/// The closed form printed for the same coefficient in the source analysis;
/// disagrees with the sum by ~4.4% at L = 10 and is reported separately.
double af_average_coefficient_closed_form(int users);

struct FadingBound {
  double value;
  bool clamped; // raw bound left [0, 1] and was clipped
};

/// Upper bound on the pairwise DF error probability in Rayleigh fading.
FadingBound fading_df_bound(double rho);

struct FadingConditional {
  double p_af;
  double p_af_prime;
};

/// Conditional AF baselines given channel power gains g = |h|^2.
FadingConditional fading_af_conditional(double g_i, double g_mid, double g_next, double rho);

/// avg = (1/(L-1)) sum_k k * run-bound(k) at the given baselines.
double af_average_ber_from_baselines(int users, double p, double p_prime);

struct FadingBaselines {
  double p_af;
  double p_af_prime;
};

/// Fading-averaged AF baselines: mean of the conditional forms over
/// `samples` independent unit-mean exponential gain triples.
FadingBaselines fading_af_baselines(double rho, int samples, std::uint64_t seed);

/// Average BER under Rayleigh fading.  DF scales the fading bound by L/2;
/// AF applies the run-bound sum to the fading-averaged baselines.
double fading_average_ber(int users, double rho, Protocol protocol, int samples,
                          std::uint64_t seed);

struct HighSnrAsymptotics {
  double p_df_inf;   // erfc(sqrt(rho))
  double p_af_inf;   // erfc(sqrt(rho / 3))
  double penalty_db; // 10 log10(3)
};

HighSnrAsymptotics high_snr_asymptotics(double rho);

} // namespace mwrn::analytics
