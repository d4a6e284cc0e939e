#pragma once

namespace spreadcpm {

// Error function by W. J. Cody's rational Chebyshev approximation (the
// CALERF coefficient set), max relative error about 1.2e-16. Used instead of
// the platform erf so printed results are stable across toolchains.
double erf_rational(double x);
double erfc_rational(double x);

// Modified Bessel function of the first kind, integer order k >= 0.
// Power series evaluation, relative error <= 1e-12 for |x| <= 50 (and far
// beyond); very large arguments switch to a scaled asymptotic form.
double bessel_i(int k, double x);

// exp(-|x|) * I_k(x); safe for arguments where I_k itself would overflow.
double bessel_i_scaled(int k, double x);

}  // namespace spreadcpm
