#include <doctest.h>

#include <cmath>
#include <random>

#include "rbf/bessel.hpp"

using rbf::bessel_i;
using rbf::bessel_j;

namespace {
struct Reference {
  int n;
  double x;
  double value;
};
}  // namespace

TEST_CASE("bessel_j matches published reference values to 1e-10") {
  // Values frozen from 25-digit arbitrary-precision evaluation.
  const Reference refs[] = {
      {0, 1.0, 0.76519768655796655},  {1, 1.0, 0.44005058574493352},
      {0, 2.0, 0.22389077914123567},  {1, 2.0, 0.57672480775687339},
      {2, 1.0, 0.11490348493190048},  {0, 5.0, -0.17759677131433830},
      {1, 5.0, -0.32757913759146522}, {3, 2.5, 0.21660039103911352},
      {0, 15.0, -0.014224472826780773}, {1, 15.0, 0.20510403861352276},
      {5, 20.0, 0.15116976798239497}, {4, 0.3, 2.0999005912958368e-5},
  };
  for (const auto& ref : refs) {
    CAPTURE(ref.n);
    CAPTURE(ref.x);
    CHECK(bessel_j(ref.n, ref.x) ==
          doctest::Approx(ref.value).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("bessel_i matches published reference values to 1e-10") {
  const Reference refs[] = {
      {0, 1.0, 1.2660658777520083},  {1, 1.0, 0.56515910399248503},
      {0, 2.0, 2.2795853023360673},  {1, 2.0, 1.5906368546373291},
      {2, 1.0, 0.13574766976703828}, {0, 5.0, 27.239871823604447},
      {3, 1.7, 0.12223264970844364}, {5, 12.0, 6493.6125766038085},
      {4, 0.3, 2.1188850044341035e-5},
  };
  for (const auto& ref : refs) {
    CAPTURE(ref.n);
    CAPTURE(ref.x);
    const double rel = std::abs(bessel_i(ref.n, ref.x) - ref.value) /
                       std::abs(ref.value);
    CHECK(rel < 1e-12);
  }
}

#if defined(__GNUC__)
TEST_CASE("bessel functions agree with the standard library oracle") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> arg(0.01, 18.0);
  for (int n = 0; n <= 8; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      const double x = arg(rng);
      const double jref = std::cyl_bessel_j(double(n), x);
      const double iref = std::cyl_bessel_i(double(n), x);
      CHECK(std::abs(bessel_j(n, x) - jref) < 1e-10 * (1.0 + std::abs(jref)));
      CHECK(std::abs(bessel_i(n, x) - iref) < 1e-10 * (1.0 + std::abs(iref)));
    }
  }
}
#endif

TEST_CASE("recurrence identity J_{n-1} + J_{n+1} = (2n/x) J_n") {
  for (double x : {0.7, 3.3, 9.1}) {
    for (int n = 1; n <= 5; ++n) {
      const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
      const double rhs = 2.0 * n / x * bessel_j(n, x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("values at zero") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(3, 0.0) == 0.0);
}
