#include "rbf/bessel.hpp"

#include <cassert>
#include <cmath>

namespace rbf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// sum_{s>=0} (-1)^s (x/2)^{n+2s} / (s! (n+s)!), accurate for x <= 12.
double j_series(int n, double x) {
  const double h = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= h / k;  // (x/2)^n / n!
  double sum = term;
  for (int s = 1; s < 80; ++s) {
    term *= -h * h / (double(s) * (n + s));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

// Hankel asymptotic expansion with coefficients
//   a_k = (mu-1)(mu-9)...(mu-(2k-1)^2) / (k! 8^k),  mu = 4n^2,
//   P ~ a_0 - a_2/x^2 + a_4/x^4 - ...,  Q ~ a_1/x - a_3/x^3 + ...
// Usable for x > 12 with n in {0, 1}.
double j_asymptotic(int n, double x) {
  const double mu = 4.0 * n * n;
  double p = 1.0, q = 0.0;
  double t = 1.0;  // a_k / x^k
  for (int k = 1; k <= 9; ++k) {
    const double odd = 2.0 * k - 1.0;
    t *= (mu - odd * odd) / (8.0 * x * k);
    const int pair = (k - 1) / 2;  // sign alternates every second term
    const double signed_t = (pair % 2 == 0) ? t : -t;
    if (k % 2 == 1)
      q += signed_t;
    else
      p -= signed_t;
  }
  const double chi = x - (0.5 * n + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// sum_{s>=0} (x/2)^{n+2s} / (s! (n+s)!); all terms positive, stable for the
// argument range used here.
double i_series(int n, double x) {
  const double h = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= h / k;
  double sum = term;
  for (int s = 1; s < 200; ++s) {
    term *= h * h / (double(s) * (n + s));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

double bessel_j(int n, double x) {
  assert(n >= 0 && x >= 0.0);
  if (x <= 12.0) return j_series(n, x);
  double jm = j_asymptotic(0, x);
  if (n == 0) return jm;
  double jc = j_asymptotic(1, x);
  // Upward recurrence J_{k+1} = (2k/x) J_k - J_{k-1}; stable while n < x.
  for (int k = 1; k < n; ++k) {
    const double jn = (2.0 * k / x) * jc - jm;
    jm = jc;
    jc = jn;
  }
  return jc;
}

double bessel_i(int n, double x) {
  assert(n >= 0 && x >= 0.0);
  return i_series(n, x);
}

}  // namespace rbf
