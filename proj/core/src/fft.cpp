#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace fwsindy::detail {

namespace {
// FFTW's planner is not reentrant; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<std::complex<double>> rfft(const double* x, int n) {
  if (n < 1) throw std::invalid_argument("rfft: empty input");
  std::vector<double> in(x, x + n);
  std::vector<std::complex<double>> out(static_cast<size_t>(n) / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("rfft: planner failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<std::complex<double>> rfft(const Eigen::VectorXd& x) {
  return rfft(x.data(), static_cast<int>(x.size()));
}

std::vector<double> irfft_unscaled(const std::vector<std::complex<double>>& F,
                                   int n) {
  if (n < 1 || F.size() != static_cast<size_t>(n) / 2 + 1)
    throw std::invalid_argument("irfft_unscaled: bad spectrum length");
  std::vector<std::complex<double>> in(F);  // c2r destroys its input
  std::vector<double> out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                out.data(), FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("irfft_unscaled: planner failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace fwsindy::detail
