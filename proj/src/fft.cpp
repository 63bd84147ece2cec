#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace bo::detail {
namespace {
std::mutex planner_mutex;
}

Fft::Fft(int n) : n_(n) {
  std::lock_guard<std::mutex> lock(planner_mutex);
  std::vector<std::complex<double>> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  fwd_ = fftw_plan_dft_1d(n, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  bwd_ = fftw_plan_dft_1d(n, pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

namespace {
void run(void* plan, int n, const std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) {
  std::vector<std::complex<double>> tmp(in);
  out.assign(static_cast<std::size_t>(n), {});
  fftw_execute_dft(static_cast<fftw_plan>(plan), reinterpret_cast<fftw_complex*>(tmp.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}
}  // namespace

void Fft::forward(const std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) const {
  run(fwd_, n_, in, out);
}

void Fft::backward(const std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) const {
  run(bwd_, n_, in, out);
}

}  // namespace bo::detail
