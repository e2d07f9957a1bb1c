// Copyright 2026 The tlsbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "tlsbayes/errors.hpp"
#include "tlsbayes/physics.hpp"

using namespace tlsbayes;
using tlsbayes::testing::one_defect;
using tlsbayes::testing::two_defects;
using tlsbayes::testing::no_defect;

TEST_CASE("stratum_of classifies the three zero patterns") {
  CHECK(stratum_of(no_defect(37.0)) == ModelClass::kNone);
  CHECK(stratum_of(one_defect(2.5, 10.0, 0.075, 37.0)) == ModelClass::kOne);
  CHECK(stratum_of(two_defects(2.8, 2.3, 5.0, -5.0, 0.07, 0.08, 33.0)) ==
        ModelClass::kTwo);
  // A defect sitting exactly at the reference frequency is still encoded.
  CHECK(stratum_of(one_defect(2.5, 0.0, 0.075, 37.0)) == ModelClass::kOne);
}

TEST_CASE("stratum_of rejects mixed zero patterns") {
  ParticleVector x = one_defect(2.5, 10.0, 0.075, 37.0);
  x(kT2d2) = 0.05;
  CHECK_THROWS_AS(stratum_of(x), EncodingError);
  ParticleVector y = no_defect(37.0);
  y(kWd1) = 3.0;
  CHECK_THROWS_AS(stratum_of(y), EncodingError);
  ParticleVector z = no_defect(37.0);
  z(kG2) = 1.0;  // g2 without g1
  CHECK_FALSE(is_valid(z));
}

TEST_CASE("is_valid enforces positivity and canonical order") {
  CHECK(is_valid(two_defects(2.8, 2.3, 5.0, -5.0, 0.07, 0.08, 33.0)));
  CHECK_FALSE(is_valid(two_defects(2.3, 2.8, 5.0, -5.0, 0.07, 0.08, 33.0)));
  CHECK_FALSE(is_valid(no_defect(0.0)));
  CHECK_FALSE(is_valid(one_defect(2.5, 10.0, 0.0, 37.0)));
}

TEST_CASE("canonicalize swaps whole defect triples") {
  ParticleVector x = two_defects(2.3, 2.8, 5.0, -5.0, 0.07, 0.08, 33.0);
  canonicalize(x);
  CHECK(x == two_defects(2.8, 2.3, -5.0, 5.0, 0.08, 0.07, 33.0));
}

TEST_CASE("relaxation_time reference values") {
  const double g = mhz_to_angular(0.4);
  SUBCASE("no defect gives the intrinsic T1 at any frequency") {
    for (double wq : {-300.0, 0.0, 17.0}) {
      CHECK(relaxation_time(no_defect(37.0), wq) == doctest::Approx(37.0).epsilon(1e-15));
    }
  }
  SUBCASE("resonant defect, frozen high-precision values") {
    const ParticleVector x = one_defect(g, 0.0, 0.075, 37.0);
    CHECK(defect_rate(g, 0.075, 0.0) ==
          doctest::Approx(0.94748202250457843).epsilon(1e-14));
    CHECK(relaxation_time(x, 0.0) ==
          doctest::Approx(1.0261577360216888).epsilon(1e-14));
  }
  SUBCASE("detuning 1/T2 halves the rate") {
    const double t2 = 0.075;
    CHECK(std::abs(defect_rate(g, t2, 1.0 / t2) / defect_rate(g, t2, 0.0) - 0.5) < 1e-12);
  }
  SUBCASE("long double evaluation agrees") {
    const ParticleVectorT<long double> xl =
        one_defect(g, 0.0, 0.075, 37.0).cast<long double>();
    CHECK(static_cast<double>(relaxation_time(xl, 0.0L)) ==
          doctest::Approx(1.0261577360216888).epsilon(1e-15));
  }
}

TEST_CASE("excited_prob examples") {
  const ParticleVector x = one_defect(mhz_to_angular(0.4), 3.0, 0.075, 37.0);
  CHECK(excited_prob(x, {3.0, 0.0}) == 1.0);
  CHECK(excited_prob(no_defect(37.0), {12.0, 37.0}) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(excited_prob(x, {3.0, 0.7}, 0.5) == 0.5);
  CHECK(excited_prob(no_defect(37.0), {0.0, 5.0}, 0.1) ==
        doctest::Approx(0.8 * std::exp(-5.0 / 37.0) + 0.1));
}

TEST_CASE("physics properties over random valid parameters") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const ParticleVector x = tlsbayes::testing::random_valid_particle(rng);
    const double wq = mhz_to_angular(-80.0 + 160.0 * u(rng));
    const double t1 = relaxation_time(x, wq);
    INFO("trial " << trial);
    CHECK(t1 > 0.0);
    CHECK(t1 <= std::nextafter(x(kT1q), 1e300));
    if (stratum_of(x) != ModelClass::kNone) CHECK(t1 < x(kT1q));

    // Rate is even in detuning, strictly decreasing in |detuning| and has
    // its half maximum at 1/T2.
    const double g = x(kG1) == 0.0 ? 2.5 : x(kG1);
    const double t2 = x(kT2d1) == 0.0 ? 0.07 : x(kT2d1);
    const double d = 200.0 * u(rng);
    CHECK(defect_rate(g, t2, d) == defect_rate(g, t2, -d));
    CHECK(defect_rate(g, t2, d + 0.5) < defect_rate(g, t2, d));
    CHECK(std::abs(defect_rate(g, t2, 1.0 / t2) / defect_rate(g, t2, 0.0) - 0.5) < 1e-12);
    CHECK(std::abs(defect_rate(g, t2, -1.0 / t2) / defect_rate(g, t2, 0.0) - 0.5) < 1e-12);

    // Excited probability decreases strictly in t for gamma < 0.5.
    const double gamma = 0.49 * u(rng);
    const double t = 0.01 + 20.0 * u(rng);
    const double p_early = excited_prob(x, {wq, t}, gamma);
    const double p_late = excited_prob(x, {wq, t * 1.1}, gamma);
    CHECK(p_late < p_early);
    CHECK(p_early >= gamma);
    CHECK(p_early <= 1.0 - gamma);

    // Stronger coupling shortens T1.
    if (x(kG1) != 0.0) {
      ParticleVector stronger = x;
      stronger(kG1) *= 1.05;
      CHECK(relaxation_time(stronger, wq) < t1);
    }
  }
}

TEST_CASE("excited_prob ignores frequency without defects") {
  const ParticleVector x = no_defect(31.0);
  for (double wq : {-200.0, -3.0, 0.0, 77.0}) {
    CHECK(excited_prob(x, {wq, 4.0}) == excited_prob(x, {0.0, 4.0}));
  }
}

TEST_CASE("regime_check reports and never rejects") {
  const double g = mhz_to_angular(0.4);
  const RegimeReport r = regime_check(one_defect(g, 0.0, 0.075, 37.0));
  CHECK(r.defects[0].present);
  CHECK(r.defects[0].rate_window_ok);
  CHECK(r.defects[0].coupling_to_rate ==
        doctest::Approx(1.0 / (2.0 * g * 0.075)).epsilon(1e-14));
  CHECK(r.defects[0].coupling_to_rate == doctest::Approx(2.6525823848649223));
  CHECK(r.defects[0].coupling_coherence_product == doctest::Approx(g * 0.075));
  CHECK_FALSE(r.defects[1].present);
  CHECK(r.defects[1].rate_window_ok);
  CHECK(r.all_rate_windows_ok());

  // Coupling above 1/T2 violates the window, reported only.
  const RegimeReport strong = regime_check(one_defect(20.0, 0.0, 0.075, 37.0));
  CHECK_FALSE(strong.defects[0].rate_window_ok);
  const RegimeReport none = regime_check(no_defect(40.0));
  CHECK(none.all_rate_windows_ok());
}
