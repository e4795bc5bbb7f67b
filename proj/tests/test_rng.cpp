#include <doctest.h>

#include <cmath>

#include "exgeo/rng.hpp"

using namespace exgeo;

TEST_CASE("identical seeds reproduce identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.u64() == b.u64());
  Rng c(43);
  int same = 0;
  Rng a2(42);
  for (int i = 0; i < 1000; ++i) same += a2.u64() == c.u64();
  CHECK(same == 0);
}

TEST_CASE("substream seeds separate streams and trials") {
  CHECK(substream_seed(1, 2, 3) == substream_seed(1, 2, 3));
  CHECK(substream_seed(1, 2, 3) != substream_seed(1, 2, 4));
  CHECK(substream_seed(1, 2, 3) != substream_seed(1, 3, 3));
  CHECK(substream_seed(2, 2, 3) != substream_seed(1, 2, 3));
}

TEST_CASE("uniform stays inside its interval") {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform(-3.0, 5.0);
    CHECK(u >= -3.0);
    CHECK(u < 5.0);
  }
}

TEST_CASE("generator moments match their laws") {
  Rng rng(1234);
  const int n = 200000;

  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    mean += x;
    m2 += x * x;
  }
  mean /= n;
  m2 /= n;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));

  long heads = 0;
  for (int i = 0; i < n; ++i) heads += rng.bernoulli(0.3);
  CHECK(std::abs(heads / static_cast<double>(n) - 0.3) <
        3.0 * std::sqrt(0.3 * 0.7 / n));

  long plus = 0;
  for (int i = 0; i < n; ++i) plus += rng.sign() > 0;
  CHECK(std::abs(plus / static_cast<double>(n) - 0.5) <
        3.0 * std::sqrt(0.25 / n));

  double pm = 0.0, pv = 0.0;
  const double lambda = 7.5;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(rng.poisson(lambda));
    pm += x;
    pv += x * x;
  }
  pm /= n;
  pv = pv / n - pm * pm;
  CHECK(pm == doctest::Approx(lambda).epsilon(0.02));
  CHECK(pv == doctest::Approx(lambda).epsilon(0.05));

  double gm = 0.0;
  for (int i = 0; i < n; ++i) gm += rng.gamma(2.5, 1.5);
  gm /= n;
  CHECK(gm == doctest::Approx(2.5 * 1.5).epsilon(0.03));
}
