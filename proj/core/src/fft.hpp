#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace fwsindy::detail {

/// Forward real FFT, bins 0..n/2, convention F[l] = sum_n x[n] e^{-i2pi ln/n}.
/// Thread-safe (planning is serialized internally).
std::vector<std::complex<double>> rfft(const double* x, int n);
std::vector<std::complex<double>> rfft(const Eigen::VectorXd& x);

/// Inverse of rfft up to the usual factor n: returns the length-n real signal
/// sum_l F[l] e^{+i2pi ln/n} (Hermitian extension implied), NOT divided by n.
std::vector<double> irfft_unscaled(const std::vector<std::complex<double>>& F,
                                   int n);

}  // namespace fwsindy::detail
