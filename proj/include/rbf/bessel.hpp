#pragma once

namespace rbf {

/// Bessel function of the first kind J_n(x), n >= 0, x >= 0.
/// Power series for small argument, Hankel asymptotic expansion plus upward
/// recurrence for large argument.
double bessel_j(int n, double x);

/// Modified Bessel function of the first kind I_n(x), n >= 0, x >= 0.
double bessel_i(int n, double x);

}  // namespace rbf
