#include "nlos/psf.hpp"

#include <cmath>

#include "nlos/fft3.hpp"

namespace nlos {

Psf build_psf(const GridSpec& grid) {
  grid.validate();
  Psf psf;
  psf.grid = grid;
  psf.data = VolumeF(2 * grid.nx, 2 * grid.ny, 2 * grid.nt);

  const double dx = grid.dx();
  const double dy = grid.dy();
  const double dv = grid.dv();
  const int nv_pad = 2 * grid.nt;

  for (int a = 0; a < 2 * grid.nx; ++a) {
    // Wrapped index -> signed lateral offset in samples.
    const int di = a < grid.nx ? a : a - 2 * grid.nx;
    for (int b = 0; b < 2 * grid.ny; ++b) {
      const int dj = b < grid.ny ? b : b - 2 * grid.ny;
      const double w = (di * dx) * (di * dx) + (dj * dy) * (dj * dy);
      const long bin = std::lround(w / dv);
      if (bin < nv_pad) psf.data(a, b, bin) = 1.0f;
    }
  }
  return psf;
}

PsfSpectrum psf_spectrum(const Psf& psf) {
  PsfSpectrum spec;
  spec.grid = psf.grid;
  spec.n0 = psf.pad0();
  spec.n1 = psf.pad1();
  spec.n2 = psf.pad2();
  spec.data.assign(psf.data.data(), psf.data.data() + psf.data.size());
  fft3(spec.data, spec.n0, spec.n1, spec.n2);
  return spec;
}

}  // namespace nlos
