#include "nlos/fft3.hpp"

#include <fftw3.h>

#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace nlos {

namespace {

// fftw_plan creation is not thread-safe; fftw_execute_dft on distinct
// buffers is. Plans are created once per (shape, direction) with
// FFTW_UNALIGNED so they can execute on any caller buffer.
class PlanCache {
 public:
  fftw_plan get(int n0, int n1, int n2, int sign) {
    const auto key = std::make_tuple(n0, n1, n2, sign);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    const size_t n = size_t(n0) * n1 * n2;
    fftw_complex* scratch = fftw_alloc_complex(n);
    if (!scratch) throw std::bad_alloc();
    fftw_plan plan = fftw_plan_dft_3d(n0, n1, n2, scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!plan) throw std::runtime_error("fftw_plan_dft_3d failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(std::complex<double>* data, int n0, int n1, int n2, int sign) {
  fftw_plan plan = cache().get(n0, n1, n2, sign);
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

}  // namespace

void fft3(std::complex<double>* data, int n0, int n1, int n2) {
  execute(data, n0, n1, n2, FFTW_FORWARD);
}

void ifft3(std::complex<double>* data, int n0, int n1, int n2) {
  execute(data, n0, n1, n2, FFTW_BACKWARD);
  const double scale = 1.0 / (double(n0) * n1 * n2);
  const size_t n = size_t(n0) * n1 * n2;
  for (size_t i = 0; i < n; ++i) data[i] *= scale;
}

}  // namespace nlos
