#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

namespace fwsindy {

/// Fourier series coefficients of a length-k sampled signal over one period
/// T = k*dt, under the DFT convention F[l] = sum_n y(n dt) e^{-i 2 pi l n / k}:
///   a0 = mean,  a_l = (2/k) Re F[l],  b_l = -(2/k) Im F[l],  1 <= l <= L,
/// with L = floor(k/2) - 1 (strictly below Nyquist).
struct FourierCoeffs {
  double period = 0.0;    // T = k*dt
  Eigen::VectorXd a;      // size L+1, a[0] is the mean
  Eigen::VectorXd b;      // size L+1, b[0] unused (zero)

  int max_index() const { return static_cast<int>(a.size()) - 1; }
};

FourierCoeffs fourier_coeffs(const Eigen::VectorXd& signal, double dt);

/// Discrete prolate spheroidal (Slepian) sequences of length N for
/// time-bandwidth product nw, computed from the commuting symmetric
/// tridiagonal eigenproblem. Rows of `tapers` are unit-norm, mutually
/// orthogonal, and sign-normalized so the first nonzero element is positive.
/// `eigenvalues` are the energy concentrations in [-W, W], W = nw/N,
/// recovered as Rayleigh quotients against the sinc kernel.
struct TaperSet {
  int N = 0;
  double nw = 0.0;
  int M = 0;                    // floor(2*nw) tapers
  Eigen::MatrixXd tapers;       // M x N
  Eigen::VectorXd eigenvalues;  // strictly descending, in (0, 1)
};

TaperSet slepian_tapers(int N, double nw);

/// Memoized tapers shared across signals and threads.
std::shared_ptr<const TaperSet> slepian_tapers_shared(int N, double nw);

/// Multitaper power spectral density on the length-k FFT grid.
struct PsdEstimate {
  Eigen::VectorXd freqs;  // Hz, l/T for l = 0..floor(k/2)
  Eigen::VectorXd power;  // nonnegative
};

/// S_MT(w_l) = (1/M) sum_j (1/k) |FFT(g_j .* (y - mean(y)))[l]|^2.
/// No zero-padding, so bin l maps one-to-one to Fourier index l.
PsdEstimate multitaper_psd(const Eigen::VectorXd& signal, double dt,
                           double nw);

/// An ordered set of Fourier indices to use as test-function frequencies.
struct FrequencySelection {
  std::vector<int> indices;  // distinct, ascending, in [1, floor(k/2)-1]
  std::string method;
};

/// The K indices l >= 1 with largest estimated power (DC excluded, Nyquist
/// excluded), ties broken toward smaller l, returned ascending.
FrequencySelection select_frequencies(const PsdEstimate& psd, int K);

/// Indices [1..L_max], the fixed low-frequency sweep.
FrequencySelection sweep_selection(int L_max);

}  // namespace fwsindy
