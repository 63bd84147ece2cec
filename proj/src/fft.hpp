#pragma once

#include <complex>
#include <vector>

namespace bo::detail {

// Complex-to-complex FFTW plan of fixed size. Planning is serialized by a
// global mutex (FFTW's planner is not thread-safe); execution is reentrant.
class Fft {
 public:
  explicit Fft(int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int size() const { return n_; }
  // out_k = sum_j in_j e^{-2 pi i jk/n}
  void forward(const std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) const;
  // out_j = sum_k in_k e^{+2 pi i jk/n}
  void backward(const std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) const;

 private:
  int n_;
  void* fwd_;
  void* bwd_;
};

}  // namespace bo::detail
