#pragma once

#include <complex>
#include <vector>

#include "nlos/volume.hpp"

namespace nlos {

// Discretized hypercone kernel h(dx, dy, w): the transient response of a
// single hidden scatterer in the squared coordinates u = z^2, v = (tc/2)^2,
// w = v - u. Stored on the zero-padded grid (2nx, 2ny, 2nt) with the kernel
// origin at index (0, 0, 0) and negative lateral offsets wrapped, ready for
// circular convolution.
struct Psf {
  GridSpec grid;
  VolumeF data;  // (2nx, 2ny, 2nt)

  int pad0() const { return 2 * grid.nx; }
  int pad1() const { return 2 * grid.ny; }
  int pad2() const { return 2 * grid.nt; }
};

// 3D Fourier transform of the padded PSF, kept in double for the filter
// arithmetic. Computed once and shared read-only across frames/threads.
struct PsfSpectrum {
  GridSpec grid;
  int n0 = 0, n1 = 0, n2 = 0;
  std::vector<std::complex<double>> data;
};

// Deposits unit mass at the v-bin nearest dx^2 + dy^2 for every lateral
// offset representable on the padded grid; columns whose hypercone exits the
// padded v-range stay empty.
Psf build_psf(const GridSpec& grid);

PsfSpectrum psf_spectrum(const Psf& psf);

}  // namespace nlos
