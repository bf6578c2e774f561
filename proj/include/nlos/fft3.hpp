#pragma once

#include <complex>
#include <vector>

namespace nlos {

// In-place 3D complex-to-complex FFT over a row-major (n0, n1, n2) block,
// n2 contiguous. The inverse transform is normalized by 1/(n0*n1*n2), so
// ifft3(fft3(x)) == x up to rounding. Plans are cached per shape; execution
// is safe from multiple threads on distinct buffers.
void fft3(std::complex<double>* data, int n0, int n1, int n2);
void ifft3(std::complex<double>* data, int n0, int n1, int n2);

inline void fft3(std::vector<std::complex<double>>& data, int n0, int n1, int n2) {
  fft3(data.data(), n0, n1, n2);
}
inline void ifft3(std::vector<std::complex<double>>& data, int n0, int n1, int n2) {
  ifft3(data.data(), n0, n1, n2);
}

}  // namespace nlos
