#include "fwsindy/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace fwsindy {

namespace {
constexpr double kPi = std::numbers::pi;
}

FourierCoeffs fourier_coeffs(const Eigen::VectorXd& signal, double dt) {
  const int k = static_cast<int>(signal.size());
  if (k < 4) throw std::invalid_argument("fourier_coeffs: need >= 4 samples");
  if (!(dt > 0.0)) throw std::invalid_argument("fourier_coeffs: dt must be > 0");
  if (!signal.allFinite())
    throw std::invalid_argument("fourier_coeffs: non-finite samples");

  const auto F = detail::rfft(signal);
  const int L = k / 2 - 1;
  FourierCoeffs fc;
  fc.period = k * dt;
  fc.a.setZero(L + 1);
  fc.b.setZero(L + 1);
  fc.a[0] = F[0].real() / k;  // mean
  for (int l = 1; l <= L; ++l) {
    fc.a[l] = 2.0 / k * F[l].real();
    fc.b[l] = -2.0 / k * F[l].imag();
  }
  return fc;
}

namespace {

// S*g for the N x N sinc kernel S[n,m] = sin(2 pi W (n-m)) / (pi (n-m)),
// applied as a zero-padded linear convolution of length 2N.
Eigen::VectorXd sinc_kernel_apply(const Eigen::VectorXd& g, double W) {
  const int N = static_cast<int>(g.size());
  const int L = 2 * N;
  std::vector<double> kernel(L, 0.0);
  kernel[0] = 2.0 * W;
  for (int d = 1; d < N; ++d) {
    const double v = std::sin(2.0 * kPi * W * d) / (kPi * d);
    kernel[d] = v;
    kernel[L - d] = v;
  }
  std::vector<double> padded(L, 0.0);
  for (int i = 0; i < N; ++i) padded[i] = g[i];

  auto K = detail::rfft(kernel.data(), L);
  const auto G = detail::rfft(padded.data(), L);
  for (size_t i = 0; i < K.size(); ++i) K[i] *= G[i];
  const auto conv = detail::irfft_unscaled(K, L);

  Eigen::VectorXd out(N);
  for (int i = 0; i < N; ++i) out[i] = conv[i] / L;
  return out;
}

}  // namespace

TaperSet slepian_tapers(int N, double nw) {
  if (N < 8) throw std::invalid_argument("slepian_tapers: N must be >= 8");
  if (!(nw >= 1.0) || !(nw <= N / 4.0))
    throw std::invalid_argument("slepian_tapers: need 1 <= nw <= N/4");
  const int M = static_cast<int>(std::floor(2.0 * nw));
  const double W = nw / N;

  // Commuting symmetric tridiagonal matrix: its eigenvectors are the
  // Slepian sequences, ordered by concentration.
  std::vector<double> diag(N), off(N - 1);
  const double c = std::cos(2.0 * kPi * W);
  for (int i = 0; i < N; ++i) {
    const double centered = (N - 1) / 2.0 - i;
    diag[i] = c * centered * centered;
  }
  for (int i = 1; i < N; ++i)
    off[i - 1] = i * (N - i) / 2.0;

  // Largest M eigenpairs (ascending index range il..iu, one-based).
  const int il = N - M + 1, iu = N;
  std::vector<double> w(N), z(static_cast<size_t>(N) * M);
  std::vector<lapack_int> isuppz(2 * static_cast<size_t>(M));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, 'V', 'I', N, diag.data(), off.data(), 0.0, 0.0, il, iu,
      0.0, &found, w.data(), z.data(), N, isuppz.data());
  if (info != 0 || found != M)
    throw std::runtime_error("slepian_tapers: tridiagonal eigensolve failed");

  TaperSet set;
  set.N = N;
  set.nw = nw;
  set.M = M;
  set.tapers.resize(M, N);
  set.eigenvalues.resize(M);
  for (int j = 0; j < M; ++j) {
    // Reverse: column M-1 holds the most concentrated sequence.
    Eigen::Map<const Eigen::VectorXd> col(&z[static_cast<size_t>(M - 1 - j) * N],
                                          N);
    Eigen::VectorXd g = col / col.norm();
    for (int i = 0; i < N; ++i) {
      if (g[i] != 0.0) {
        if (g[i] < 0.0) g = -g;
        break;
      }
    }
    set.tapers.row(j) = g.transpose();
    // True concentrations lie in (0,1) and descend with j; the Rayleigh
    // quotient can saturate at 1 to machine precision for small j and
    // large nw, so clamp and compare with a roundoff allowance.
    set.eigenvalues[j] = std::min(g.dot(sinc_kernel_apply(g, W)),
                                  1.0 - 1e-16);
  }

  for (int j = 1; j < M; ++j) {
    if (set.eigenvalues[j] >= set.eigenvalues[j - 1] + 1e-12)
      throw std::runtime_error(
          "slepian_tapers: concentration eigenvalues not descending");
    if (set.eigenvalues[j] >= set.eigenvalues[j - 1])
      set.eigenvalues[j] = std::nextafter(set.eigenvalues[j - 1], 0.0);
  }
  return set;
}

std::shared_ptr<const TaperSet> slepian_tapers_shared(int N, double nw) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const TaperSet>>
      cache;
  const auto key = std::make_pair(N, nw);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto set = std::make_shared<const TaperSet>(slepian_tapers(N, nw));
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(set));
  return it->second;
}

PsdEstimate multitaper_psd(const Eigen::VectorXd& signal, double dt,
                           double nw) {
  const int k = static_cast<int>(signal.size());
  if (k < 8) throw std::invalid_argument("multitaper_psd: need >= 8 samples");
  if (!(dt > 0.0)) throw std::invalid_argument("multitaper_psd: dt must be > 0");
  if (!signal.allFinite())
    throw std::invalid_argument("multitaper_psd: non-finite samples");

  const auto tapers = slepian_tapers_shared(k, nw);
  const Eigen::VectorXd centered =
      signal.array() - signal.mean();

  const int bins = k / 2 + 1;
  PsdEstimate psd;
  psd.power.setZero(bins);
  Eigen::VectorXd windowed(k);
  for (int j = 0; j < tapers->M; ++j) {
    windowed = tapers->tapers.row(j).transpose().cwiseProduct(centered);
    const auto F = detail::rfft(windowed);
    for (int l = 0; l < bins; ++l) psd.power[l] += std::norm(F[l]) / k;
  }
  psd.power /= tapers->M;

  const double T = k * dt;
  psd.freqs.resize(bins);
  for (int l = 0; l < bins; ++l) psd.freqs[l] = l / T;
  return psd;
}

FrequencySelection select_frequencies(const PsdEstimate& psd, int K) {
  const int bins = static_cast<int>(psd.power.size());
  // Candidates exclude DC and the Nyquist bin so every selected index maps
  // to a below-Nyquist Fourier coefficient.
  const int max_index = bins - 2;
  if (K < 1 || K > max_index)
    throw std::invalid_argument("select_frequencies: K out of range");

  std::vector<int> order(max_index);
  for (int l = 1; l <= max_index; ++l) order[l - 1] = l;
  std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    if (psd.power[lhs] != psd.power[rhs])
      return psd.power[lhs] > psd.power[rhs];
    return lhs < rhs;
  });
  order.resize(K);
  std::sort(order.begin(), order.end());

  FrequencySelection sel;
  sel.indices = std::move(order);
  sel.method = "sde";
  return sel;
}

FrequencySelection sweep_selection(int L_max) {
  if (L_max < 1)
    throw std::invalid_argument("sweep_selection: L_max must be >= 1");
  FrequencySelection sel;
  sel.indices.resize(L_max);
  for (int l = 1; l <= L_max; ++l) sel.indices[l - 1] = l;
  sel.method = "sweep";
  return sel;
}

}  // namespace fwsindy
