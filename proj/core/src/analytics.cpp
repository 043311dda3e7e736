#include "mwrn/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mwrn/channel.hpp"

namespace mwrn::analytics {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

inline double powi(double base, int e) { return e <= 0 ? 1.0 : std::pow(base, e); }

// --- pattern probabilities for one extraction chain ---------------------
//
// DF: the chain decodes by cumulative XOR, so a pair-bit flip at position f
// leaves the decoded run wrong until the next flip.  Wrong-count k per chain:
//   k = 0  <=>  no flips
//   k = 1  <=>  one adjacent flip pair, or a single flip at the last pair
//   k = 2  <=>  flips two apart / single flip one before the end /
//               adjacent pair plus a flip at the end / two adjacent pairs
// Weights are iid Bernoulli(p) over the chain's n pairs.

double df_chain0(int n, double p) { return powi(1.0 - p, n); }

double df_chain1(int n, double p) {
  if (n < 1) return 0.0;
  const double q = 1.0 - p;
  double v = p * powi(q, n - 1);
  if (n >= 2) v += (n - 1) * p * p * powi(q, n - 2);
  return v;
}

double df_chain2(int n, double p) {
  if (n < 2) return 0.0;
  const double q = 1.0 - p;
  double v = p * powi(q, n - 1) + (n - 2) * p * p * powi(q, n - 2);
  if (n >= 3) v += (n - 2) * p * p * p * powi(q, n - 3);
  if (n >= 4) v += 0.5 * (n - 3) * (n - 2) * p * p * p * p * powi(q, n - 4);
  return v;
}

// AF: the chain is a Markov walk over decision correctness; an error step
// occurs with probability p after a correct step and p' after an error.

double af_chain0(int n, double p) { return powi(1.0 - p, n); }

double af_chain1(int n, double p, double pp) {
  if (n < 1) return 0.0;
  const double q = 1.0 - p;
  double v = p * powi(q, n - 1);
  if (n >= 2) v += (n - 1) * p * (1.0 - pp) * powi(q, n - 2);
  return v;
}

double af_chain2(int n, double p, double pp) {
  if (n < 2) return 0.0;
  const double q = 1.0 - p;
  double v = p * pp * powi(q, n - 2);
  if (n >= 3) v += (n - 2) * p * pp * (1.0 - pp) * powi(q, n - 3);
  if (n >= 3) v += (n - 2) * p * p * (1.0 - pp) * powi(q, n - 3);
  if (n >= 4) v += 0.5 * (n - 3) * (n - 2) * p * p * (1.0 - pp) * (1.0 - pp) * powi(q, n - 4);
  return v;
}

void check_event_domain(int users, int observer, int k) {
  if (users < 2) throw std::domain_error("users must be >= 2");
  if (observer < 1 || observer > users) throw std::domain_error("observer out of range");
  if (k < 1 || k > users - 1) throw std::domain_error("event order k out of range");
}

} // namespace

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

LinkParameters link_parameters(int users, double n0) {
  if (users < 2) throw std::domain_error("users must be >= 2");
  if (n0 <= 0.0) throw std::domain_error("n0 must be > 0");
  const double overhead = (2.0 * users - 2.0) / users;
  return link_parameters_from_rho(1.0 / (overhead * n0));
}

LinkParameters link_parameters_from_rho(double rho) {
  if (rho <= 0.0) throw std::domain_error("rho must be > 0");
  LinkParameters lp{};
  lp.rho = rho;
  lp.noise_variance = 1.0 / (2.0 * rho);
  lp.alpha = std::sqrt(1.0 / (2.0 + lp.noise_variance));
  // exp(-8 rho) underflows to 0 at large rho, leaving 1 + ln(2)/(4 rho).
  lp.gamma_r = 1.0 + std::log1p(std::sqrt(-std::expm1(-8.0 * rho))) / (4.0 * rho);
  const double s = std::sqrt(rho);
  const double x = std::erfc((lp.gamma_r + 2.0) * s) + std::erfc((lp.gamma_r - 2.0) * s) +
                   2.0 * std::erfc(lp.gamma_r * s);
  lp.gamma = std::log(std::max(4.0 / x - 1.0, 1e-300)) / (4.0 * rho);
  return lp;
}

TwrnBaselines twrn_baselines(const LinkParameters& lp) {
  const double s = std::sqrt(lp.rho);
  const double gr = lp.gamma_r;
  const double g = lp.gamma;

  // Relay transition probabilities: decide network bit 0 iff |r| >= gamma_r,
  // with r = +-2 + n when the pair's bits agree and r = n otherwise.
  const double q00 = 0.5 * (std::erfc((gr - 2.0) * s) + std::erfc((gr + 2.0) * s));
  const double q10 = 0.5 * (std::erfc((2.0 - gr) * s) - std::erfc((2.0 + gr) * s));
  const double q01 = std::erfc(gr * s);
  const double q11 = 1.0 - q01;

  // User transition probabilities: decide 0 iff y >= gamma, broadcast +-1.
  // Small tails are evaluated directly to avoid cancellation.
  const double u1p = 0.5 * std::erfc((1.0 - g) * s); // reads +1 as bit 1
  const double u0m = 0.5 * std::erfc((1.0 + g) * s); // reads -1 as bit 0
  const double u0p = 1.0 - u1p;
  const double u1m = 1.0 - u0m;

  TwrnBaselines b{};
  b.p_df = 0.5 * (q00 * u1p + q10 * u1m + q01 * u0p + q11 * u0m);

  const double a = lp.alpha;
  const double arg = a * s / std::sqrt(a * a + 1.0);
  b.p_af = 0.5 * std::erfc(arg);
  b.p_af_prime = 0.25 * (std::erfc(3.0 * arg) + std::erfc(-arg));
  return b;
}

double df_event_exact(int users, double p, int observer, int k) {
  const int nd = users - observer;
  const int nu = observer - 1;
  if (k == 1) return df_chain1(nd, p) * df_chain0(nu, p) + df_chain0(nd, p) * df_chain1(nu, p);
  if (k == 2)
    return df_chain2(nd, p) * df_chain0(nu, p) + df_chain1(nd, p) * df_chain1(nu, p) +
           df_chain0(nd, p) * df_chain2(nu, p);
  throw std::domain_error("exact form covers k in {1, 2}");
}

double df_event_asymptotic(int users, double p) { return powi(1.0 - p, users - 2) * p; }

double af_event_exact(int users, double p, double p_prime, int observer, int k) {
  const int nd = users - observer;
  const int nu = observer - 1;
  if (k == 1)
    return af_chain1(nd, p, p_prime) * af_chain0(nu, p) +
           af_chain0(nd, p) * af_chain1(nu, p, p_prime);
  if (k == 2)
    return af_chain2(nd, p, p_prime) * af_chain0(nu, p) +
           af_chain1(nd, p, p_prime) * af_chain1(nu, p, p_prime) +
           af_chain0(nd, p) * af_chain2(nu, p, p_prime);
  throw std::domain_error("exact form covers k in {1, 2}");
}

double af_event_asymptotic(int users, double p, double p_prime, int k) {
  const double q = 1.0 - p;
  const double ratio = p_prime / q;
  const double runs = (users - k - 1) * powi(q, users - 3) * p * (1.0 - p_prime) +
                      powi(q, users - 2) * p;
  return powi(ratio, k - 1) * runs;
}

double af_event_reduced_at(int users, double p, int k) {
  return std::ldexp(static_cast<double>(users - k + 1), -k) * p;
}

EventProbability df_event_probability(int users, double rho, int observer, int k) {
  check_event_domain(users, observer, k);
  const TwrnBaselines b = twrn_baselines(link_parameters_from_rho(rho));
  if (k <= 2) return {df_event_exact(users, b.p_df, observer, k), true};
  return {df_event_asymptotic(users, b.p_df), false};
}

EventProbability af_event_probability(int users, double rho, int observer, int k) {
  check_event_domain(users, observer, k);
  const TwrnBaselines b = twrn_baselines(link_parameters_from_rho(rho));
  if (k <= 2) return {af_event_exact(users, b.p_af, b.p_af_prime, observer, k), true};
  return {af_event_asymptotic(users, b.p_af, b.p_af_prime, k), false};
}

double af_event_probability_reduced(int users, double rho, int k) {
  check_event_domain(users, users, k);
  const TwrnBaselines b = twrn_baselines(link_parameters_from_rho(rho));
  return af_event_reduced_at(users, b.p_af, k);
}

double af_average_coefficient(int users) {
  double sum = 0.0;
  for (int k = 1; k <= users - 1; ++k)
    sum += k * std::ldexp(static_cast<double>(users - k + 1), -k);
  return sum / (users - 1);
}

double af_average_coefficient_closed_form(int users) {
  const double l = users;
  const double inv = std::ldexp(1.0, -(users - 2));
  return ((l + 1.0) / (l - 1.0)) * (2.0 - l * inv) -
         (3.0 / (l - 1.0)) * (2.0 - (l * l - 3.0) * inv);
}

double average_ber(int users, double rho, Protocol protocol) {
  const TwrnBaselines b = twrn_baselines(link_parameters_from_rho(rho));
  if (protocol == Protocol::kDf) return clamp01(0.5 * users * b.p_df);
  return clamp01(af_average_coefficient(users) * b.p_af);
}

FadingBound fading_df_bound(double rho) {
  if (rho <= 0.0) throw std::domain_error("rho must be > 0");
  const double gb = rho;
  const double s = std::sqrt(gb / (1.0 + gb));
  const double phi1 = 0.5 / ((1.0 + gb) * (1.0 + s)); // (1 - s) / 2, stable at large gb
  const double phi2 = (kPi / 2.0 - 2.0 * s * (kPi / 2.0 - std::atan(s))) / (2.0 * kPi);
  const double d1 = std::sqrt((1.0 + gb) / (3.0 + gb));
  const double d2 = std::sqrt(gb / (2.0 + gb));
  const double cot = 1.0 / s; // cotangent of the angle whose tangent is s
  const double z1 = -d1 * cot;
  const double z2 = -d2 * cot;
  const double phi3 = (kPi / 2.0 - d1 * (kPi / 2.0 + std::atan(z1)) -
                       d2 * (kPi / 2.0 + std::atan(z2))) /
                      (2.0 * kPi);
  const double xi = 2.0 * phi1 - 4.0 * phi1 * phi1 - 2.0 * phi2 - 2.0 * s * phi3;
  const double raw = 2.0 * phi1 + 0.5 * xi;
  FadingBound out{};
  out.clamped = raw < 0.0 || raw > 1.0;
  out.value = clamp01(raw);
  return out;
}

FadingConditional fading_af_conditional(double g_i, double g_mid, double g_next, double rho) {
  if (g_i < 0.0 || g_mid < 0.0 || g_next < 0.0) throw std::domain_error("gains must be >= 0");
  if (rho <= 0.0) throw std::domain_error("rho must be > 0");
  const double inv = 1.0 / rho;
  FadingConditional out{};
  out.p_af = q_function(std::sqrt(g_i * g_mid / (2.0 * g_i * inv + g_mid * inv + inv * inv)));
  out.p_af_prime = q_function(std::sqrt(
      g_i * g_next / (4.0 * g_i * g_mid + 2.0 * g_i * inv + g_next * inv + inv * inv)));
  return out;
}

double af_average_ber_from_baselines(int users, double p, double p_prime) {
  double sum = 0.0;
  for (int k = 1; k <= users - 1; ++k)
    sum += k * af_event_asymptotic(users, p, p_prime, k);
  return sum / (users - 1);
}

FadingBaselines fading_af_baselines(double rho, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::domain_error("samples must be >= 1");
  channel::RandomStream stream(seed, {0, 0, channel::Role::kFadingGains, 0});
  auto exp_gain = [&stream] { return -std::log1p(-stream.next_unit()); };
  double acc_p = 0.0;
  double acc_pp = 0.0;
  for (int n = 0; n < samples; ++n) {
    const double g1 = exp_gain();
    const double g2 = exp_gain();
    const double g3 = exp_gain();
    const FadingConditional c = fading_af_conditional(g1, g2, g3, rho);
    acc_p += c.p_af;
    acc_pp += c.p_af_prime;
  }
  return {acc_p / samples, acc_pp / samples};
}

double fading_average_ber(int users, double rho, Protocol protocol, int samples,
                          std::uint64_t seed) {
  if (protocol == Protocol::kDf) {
    return clamp01(0.5 * users * fading_df_bound(rho).value);
  }
  const FadingBaselines b = fading_af_baselines(rho, samples, seed);
  return clamp01(af_average_ber_from_baselines(users, b.p_af, b.p_af_prime));
}

HighSnrAsymptotics high_snr_asymptotics(double rho) {
  if (rho <= 0.0) throw std::domain_error("rho must be > 0");
  return {std::erfc(std::sqrt(rho)), std::erfc(std::sqrt(rho / 3.0)),
          10.0 * std::log10(3.0)};
}

} // namespace mwrn::analytics
