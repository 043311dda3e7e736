#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mwrn/analytics.hpp"
#include "mwrn/experiment.hpp"
#include "quadrature.hpp"

using namespace mwrn;
using namespace mwrn::analytics;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

// Gaussian tail via its Maclaurin series, independent of erfc.
double q_series(double x) {
  double sum = 0.0;
  double term = x;
  double fact = 1.0;
  for (int n = 0; n < 40; ++n) {
    if (n > 0) {
      fact *= n;
      term = std::pow(x, 2 * n + 1);
    }
    sum += (n % 2 ? -1.0 : 1.0) * term / (fact * std::pow(2.0, n) * (2 * n + 1));
  }
  return 0.5 - sum / std::sqrt(2.0 * M_PI);
}

} // namespace

TEST_CASE("link_parameters basic values") {
  const LinkParameters lp = link_parameters(2, 1.0);
  CHECK(lp.rho == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lp.noise_variance == doctest::Approx(0.5).epsilon(1e-15));

  const LinkParameters lp10 = link_parameters(10, 1.0);
  CHECK(lp10.rho == doctest::Approx(1.0 / 1.8).epsilon(1e-14));
  CHECK(lp10.noise_variance == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(lp10.alpha == doctest::Approx(0.58722021951470349).epsilon(1e-13));
}

TEST_CASE("link_parameters domain errors") {
  CHECK_THROWS_AS(link_parameters(1, 1.0), std::domain_error);
  CHECK_THROWS_AS(link_parameters(10, 0.0), std::domain_error);
  CHECK_THROWS_AS(link_parameters(10, -1.0), std::domain_error);
  CHECK_THROWS_AS(link_parameters_from_rho(0.0), std::domain_error);
}

TEST_CASE("alpha approaches sqrt(1/2) in the zero-noise limit") {
  const LinkParameters lp = link_parameters(2, 1e-12);
  CHECK(lp.alpha == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("thresholds at rho = 1 and in the high-SNR limit") {
  const LinkParameters lp = link_parameters_from_rho(1.0);
  CHECK(lp.gamma_r == doctest::Approx(1.1732658260877076).epsilon(1e-14));
  CHECK(lp.gamma == doctest::Approx(0.0120505749737755).epsilon(1e-12));

  const LinkParameters hi = link_parameters_from_rho(1e6);
  CHECK(hi.gamma_r == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(hi.gamma) < 1e-8);
}

TEST_CASE("gamma_r stays within its analytic band") {
  for (double rho : log_grid(1e-3, 1e6, 60)) {
    const LinkParameters lp = link_parameters_from_rho(rho);
    CHECK(lp.gamma_r > 1.0);
    CHECK(lp.gamma_r <= 1.0 + std::log(2.0) / (4.0 * rho) + 1e-15);
  }
}

TEST_CASE("twrn_baselines reference values at rho = 1") {
  const TwrnBaselines b = twrn_baselines(link_parameters_from_rho(1.0));
  CHECK(b.p_df == doctest::Approx(0.17062360470999189).epsilon(1e-13));
  CHECK(b.p_af == doctest::Approx(0.22484589898444545).epsilon(1e-13));
  CHECK(b.p_af_prime == doctest::Approx(0.39341260101100).epsilon(1e-13));
}

TEST_CASE("twrn_baselines against decision-region quadrature") {
  const LinkParameters lp = link_parameters(2, 1.0);
  const TwrnBaselines b = twrn_baselines(lp);
  const double nv = lp.noise_variance;

  // relay regions over the three superposition levels
  const double q00 =
      0.5 * ((1.0 - oracle::gauss_prob(2.0, nv, -lp.gamma_r, lp.gamma_r)) +
             (1.0 - oracle::gauss_prob(-2.0, nv, -lp.gamma_r, lp.gamma_r)));
  const double q01 = 1.0 - oracle::gauss_prob(0.0, nv, -lp.gamma_r, lp.gamma_r);
  // user regions over the binary re-broadcast
  const double u0p = oracle::gauss_tail(1.0, nv, lp.gamma);
  const double u0m = oracle::gauss_tail(-1.0, nv, lp.gamma);
  const double p_df_quad = 0.5 * (q00 * (1.0 - u0p) + (1.0 - q00) * (1.0 - u0m) +
                                  q01 * u0p + (1.0 - q01) * u0m);
  CHECK(b.p_df == doctest::Approx(p_df_quad).epsilon(1e-10));
  CHECK(b.p_df > 0.0);
  CHECK(b.p_df < 0.5);

  // AF residual noise is Gaussian with variance (alpha^2 + 1) nv
  const double veff = (lp.alpha * lp.alpha + 1.0) * nv;
  const double p_af_quad = oracle::gauss_tail(0.0, veff, lp.alpha);
  CHECK(b.p_af == doctest::Approx(p_af_quad).epsilon(1e-10));
  CHECK(b.p_af > 0.0);
  CHECK(b.p_af < 0.5);

  const double p_afp_quad =
      0.5 * (oracle::gauss_tail(0.0, veff, 3.0 * lp.alpha) + oracle::gauss_tail(0.0, veff, -lp.alpha));
  CHECK(b.p_af_prime == doctest::Approx(p_afp_quad).epsilon(1e-10));
}

TEST_CASE("baseline limits at high SNR") {
  const TwrnBaselines b = twrn_baselines(link_parameters_from_rho(1e6));
  CHECK(b.p_af_prime == doctest::Approx(0.5).epsilon(1e-9));
  for (double rho : {16.0, 25.0}) {
    const TwrnBaselines hb = twrn_baselines(link_parameters_from_rho(rho));
    const double ratio = hb.p_df / std::erfc(std::sqrt(rho));
    CHECK(ratio > 1.0);
    CHECK(ratio < 1.6);
  }
}

TEST_CASE("baselines are finite, in [0,1], monotone over the working grid") {
  double prev_df = 1.0, prev_af = 1.0;
  for (double rho : log_grid(1e-3, 1e6, 100)) {
    const TwrnBaselines b = twrn_baselines(link_parameters_from_rho(rho));
    for (double v : {b.p_df, b.p_af, b.p_af_prime}) {
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(b.p_af_prime >= b.p_af - 1e-15);
    CHECK(b.p_df <= prev_df + 1e-12);
    CHECK(b.p_af <= prev_af + 1e-12);
    prev_df = b.p_df;
    prev_af = b.p_af;
  }
}

TEST_CASE("df_event_probability matches the single-event case composition") {
  const double rho = 2.5;
  const TwrnBaselines b = twrn_baselines(link_parameters_from_rho(rho));
  const double p = b.p_df;
  const double pa = std::pow(1.0 - p, 7) * p * p;
  const double pb = std::pow(1.0 - p, 8) * p;
  const EventProbability e = df_event_probability(10, rho, 1, 1);
  CHECK(e.exact);
  CHECK(e.value == doctest::Approx(8.0 * pa + pb).epsilon(1e-13));
  const EventProbability mid = df_event_probability(10, rho, 5, 1);
  CHECK(mid.value == doctest::Approx(7.0 * pa + 2.0 * pb).epsilon(1e-13));
}

TEST_CASE("df event probabilities equal the enumeration oracle") {
  for (int L : {5, 9}) {
    for (double p : {0.3, 0.05}) {
      for (int i = 1; i <= L; ++i) {
        const auto dist = experiment::df_enumeration_oracle(L, p, i);
        CHECK(df_event_exact(L, p, i, 1) == doctest::Approx(dist[1]).epsilon(1e-12));
        CHECK(df_event_exact(L, p, i, 2) == doctest::Approx(dist[2]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("df event probability vanishes with the baseline") {
  for (int k : {1, 2, 5}) {
    const EventProbability e = df_event_probability(10, 1e6, 3, k);
    CHECK(e.value < 1e-30);
  }
}

TEST_CASE("df high-order events are independent of i and k") {
  const double rho = 4.0;
  const double ref = df_event_probability(10, rho, 1, 3).value;
  for (int i = 1; i <= 10; ++i)
    for (int k = 3; k <= 9; ++k) {
      const EventProbability e = df_event_probability(10, rho, i, k);
      CHECK(!e.exact);
      CHECK(e.value == ref);
    }
}

TEST_CASE("df/af event probability domain errors") {
  CHECK_THROWS_AS(df_event_probability(10, 1.0, 0, 1), std::domain_error);
  CHECK_THROWS_AS(df_event_probability(10, 1.0, 11, 1), std::domain_error);
  CHECK_THROWS_AS(df_event_probability(10, 1.0, 1, 0), std::domain_error);
  CHECK_THROWS_AS(df_event_probability(10, 1.0, 1, 10), std::domain_error);
  CHECK_THROWS_AS(af_event_probability(10, 1.0, 0, 1), std::domain_error);
  CHECK_THROWS_AS(af_event_probability(10, 1.0, 1, 10), std::domain_error);
}

TEST_CASE("af event probabilities equal the two-chain DP oracle") {
  const auto dist = experiment::af_markov_oracle(8, 0.1, 0.4, 3);
  CHECK(af_event_exact(8, 0.1, 0.4, 3, 1) == doctest::Approx(dist[1]).epsilon(1e-12));
  CHECK(af_event_exact(8, 0.1, 0.4, 3, 2) == doctest::Approx(dist[2]).epsilon(1e-12));
}

TEST_CASE("af reduced form scaling") {
  const double rho = 10.0;
  const TwrnBaselines b = twrn_baselines(link_parameters_from_rho(rho));
  CHECK(af_event_probability_reduced(10, rho, 1) == doctest::Approx(5.0 * b.p_af).epsilon(1e-15));
  CHECK(af_event_probability_reduced(10, rho, 7) ==
        doctest::Approx(0.03125 * b.p_af).epsilon(1e-15));
  // consecutive-order ratio is (L-k)/(2(L-k+1)), bit-exactly
  for (int L : {4, 10, 13}) {
    for (int k = 1; k + 1 <= L - 1; ++k) {
      const double a = af_event_reduced_at(L, 0.37, k);
      const double c = af_event_reduced_at(L, 0.37, k + 1);
      CHECK(c * 2.0 * (L - k + 1) == doctest::Approx(a * (L - k)).epsilon(1e-15));
    }
  }
}

TEST_CASE("af event probability vanishes with the baseline") {
  for (int k : {1, 2, 4}) CHECK(af_event_probability(10, 1e6, 2, k).value < 1e-20);
  CHECK(af_event_exact(10, 0.0, 0.3, 4, 1) == 0.0);
  CHECK(af_event_asymptotic(10, 0.0, 0.3, 5) == 0.0);
}

TEST_CASE("af asymptotic entries decrease strictly in k") {
  const double rho = 25.0;
  const TwrnBaselines b = twrn_baselines(link_parameters_from_rho(rho));
  for (int L : {3, 6, 10}) {
    for (int k = 1; k + 1 <= L - 1; ++k) {
      CHECK(af_event_reduced_at(L, b.p_af, k + 1) < af_event_reduced_at(L, b.p_af, k));
      CHECK(af_event_asymptotic(L, b.p_af, b.p_af_prime, k + 1) <
            af_event_asymptotic(L, b.p_af, b.p_af_prime, k));
    }
  }
}

TEST_CASE("average_ber degenerates to the pair baselines at L = 2") {
  for (double rho : {0.5, 2.0, 10.0}) {
    const TwrnBaselines b = twrn_baselines(link_parameters_from_rho(rho));
    CHECK(average_ber(2, rho, Protocol::kDf) == b.p_df);
    CHECK(average_ber(2, rho, Protocol::kAf) == b.p_af);
  }
}

TEST_CASE("af average coefficient, event-sum vs closed form") {
  CHECK(af_average_coefficient(10) == 4097.0 / 2304.0);
  CHECK(af_average_coefficient_closed_form(10) == doctest::Approx(4277.0 / 2304.0).epsilon(1e-15));
  const double ratio = af_average_coefficient_closed_form(10) / af_average_coefficient(10);
  CHECK(ratio == doctest::Approx(1.0439).epsilon(1e-3)); // the two forms disagree by ~4.4%
}

TEST_CASE("average_ber stays in [0,1] and is monotone") {
  for (Protocol proto : {Protocol::kDf, Protocol::kAf}) {
    for (int L : {2, 10, 100}) {
      double prev = 1.0;
      for (double rho : log_grid(1e-3, 1e6, 100)) {
        const double v = average_ber(L, rho, proto);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v <= prev + 1e-12);
        prev = v;
      }
    }
  }
}

TEST_CASE("fading_df_bound limits and reference value") {
  CHECK_THROWS_AS(fading_df_bound(0.0), std::domain_error);
  CHECK(fading_df_bound(1e-10).value == doctest::Approx(0.75).epsilon(1e-4));
  CHECK(fading_df_bound(1e6).value < 1e-4);
  CHECK(fading_df_bound(1e6).value > 0.0);

  const FadingBound at10 = fading_df_bound(10.0);
  CHECK(!at10.clamped);
  CHECK(at10.value > 0.0);
  CHECK(at10.value < 0.1);
  CHECK(at10.value == doctest::Approx(0.0498983904995001).epsilon(1e-12));

  // term-by-term recomputation in extended precision
  const long double gb = 10.0L;
  const long double s = sqrtl(gb / (1.0L + gb));
  const long double pi = 3.14159265358979323846L;
  const long double phi1 = (1.0L - s) / 2.0L;
  const long double phi2 = (pi / 2 - 2.0L * s * (pi / 2 - atanl(s))) / (2.0L * pi);
  const long double d1 = sqrtl((1.0L + gb) / (3.0L + gb));
  const long double d2 = sqrtl(gb / (2.0L + gb));
  const long double phi3 =
      (pi / 2 - d1 * (pi / 2 + atanl(-d1 / s)) - d2 * (pi / 2 + atanl(-d2 / s))) / (2.0L * pi);
  const long double xi = 2.0L * phi1 - 4.0L * phi1 * phi1 - 2.0L * phi2 - 2.0L * s * phi3;
  CHECK(at10.value == doctest::Approx(static_cast<double>(2.0L * phi1 + xi / 2.0L)).epsilon(1e-14));

  double prev = 1.0;
  for (double rho : log_grid(1e-3, 1e6, 100)) {
    const FadingBound fb = fading_df_bound(rho);
    CHECK(!fb.clamped);
    CHECK(fb.value <= prev + 1e-12);
    prev = fb.value;
  }
}

TEST_CASE("fading_af_conditional special values") {
  CHECK(fading_af_conditional(0.0, 1.3, 0.7, 5.0).p_af == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(fading_af_conditional(1.0, 0.0, 0.7, 5.0).p_af == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(fading_af_conditional(0.0, 1.0, 1.0, 5.0).p_af_prime == doctest::Approx(0.5).epsilon(1e-15));

  const FadingConditional hi = fading_af_conditional(1.0, 1.0, 1.0, 1e9);
  CHECK(hi.p_af < 1e-12);
  CHECK(hi.p_af_prime == doctest::Approx(q_series(0.5)).epsilon(1e-9));
  CHECK(q_series(0.5) == doctest::Approx(0.30853753872598690).epsilon(1e-12));

  CHECK_THROWS_AS(fading_af_conditional(-1.0, 1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(fading_af_conditional(1.0, 1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("fading_average_ber DF reduces to the bound at L = 2") {
  for (double rho : {1.0, 10.0, 316.0})
    CHECK(fading_average_ber(2, rho, Protocol::kDf, 1, 7) == fading_df_bound(rho).value);
}

TEST_CASE("fading_average_ber AF single sample equals the per-draw evaluation") {
  const double rho = 100.0;
  const std::uint64_t seed = 42;
  channel::RandomStream stream(seed, {0, 0, channel::Role::kFadingGains, 0});
  const double g1 = -std::log1p(-stream.next_unit());
  const double g2 = -std::log1p(-stream.next_unit());
  const double g3 = -std::log1p(-stream.next_unit());
  const FadingConditional c = fading_af_conditional(g1, g2, g3, rho);
  CHECK(fading_average_ber(10, rho, Protocol::kAf, 1, seed) ==
        doctest::Approx(af_average_ber_from_baselines(10, c.p_af, c.p_af_prime)).epsilon(1e-15));
}

TEST_CASE("af run-bound sum at pinned unit gains matches a direct evaluation") {
  const double rho = 300.0;
  const FadingConditional c = fading_af_conditional(1.0, 1.0, 1.0, rho);
  const int L = 10;
  double direct = 0.0;
  for (int k = 1; k <= L - 1; ++k) {
    const double run = std::pow(c.p_af_prime / (1.0 - c.p_af), k - 1) *
                       ((L - k - 1) * std::pow(1.0 - c.p_af, L - 3) * c.p_af * (1.0 - c.p_af_prime) +
                        std::pow(1.0 - c.p_af, L - 2) * c.p_af);
    direct += k * run;
  }
  direct /= L - 1;
  CHECK(af_average_ber_from_baselines(L, c.p_af, c.p_af_prime) ==
        doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("fading_average_ber AF is seed-stable at 1e5 samples") {
  const double rho = std::pow(10.0, 2.5);
  const int seeds = 50;
  double sum = 0.0, sq = 0.0;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const double v = fading_average_ber(10, rho, Protocol::kAf, 100000, seed);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / seeds;
  const double sd = std::sqrt((sq - seeds * mean * mean) / (seeds - 1));
  CHECK(sd / mean < 0.02);
}

TEST_CASE("high_snr_asymptotics") {
  const HighSnrAsymptotics a = high_snr_asymptotics(9.0);
  CHECK(a.penalty_db == 10.0 * std::log10(3.0));
  CHECK(a.penalty_db == doctest::Approx(4.7712125471966244).epsilon(1e-15));
  CHECK(a.p_df_inf == doctest::Approx(2.2090496998585441e-5).epsilon(1e-12));
  for (double rho : {0.3, 3.0, 30.0})
    CHECK(high_snr_asymptotics(rho).p_af_inf ==
          doctest::Approx(high_snr_asymptotics(rho / 3.0).p_df_inf).epsilon(1e-15));
}

TEST_CASE("q_function agrees with the series expansion") {
  for (double x : {0.0, 0.25, 0.5, 1.0, 2.0})
    CHECK(q_function(x) == doctest::Approx(q_series(x)).epsilon(1e-11));
}
