#pragma once

#include <cmath>
#include <string>

#include "nlos/errors.hpp"

namespace nlos {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Discretization of one confocal scan: wall sample grid, time-of-flight bins
// and reconstruction depth bins. One GridSpec is shared by every volume in a
// pipeline run.
//
// Lattice conventions (fixed for the whole toolkit):
//   wall samples   x_i = (i + 0.5) * dx - wall_width/2, dx = wall_width / nx
//   time bins      t_k = k * bin_width,                 k in [0, nt)
//   depth bins     z_j = (j + 1) * dz,  dz = z_max/nz   (centers in (0, z_max])
//   v lattice      v_l = l * dv,        dv = v_max/nt   (v = (t c / 2)^2)
//   u lattice      u_m = m * du,        du = u_max/nz   (u = z^2, u_max = v_max)
struct GridSpec {
  int nx = 32;
  int ny = 32;
  int nt = 64;
  int nz = 64;
  double wall_width_m = 2.0;
  double bin_width_s = 0.25e-9;

  double z_max() const { return kSpeedOfLight * nt * bin_width_s / 2.0; }
  double v_max() const { return z_max() * z_max(); }
  double u_max() const { return v_max(); }

  double dx() const { return wall_width_m / nx; }
  double dy() const { return wall_width_m / ny; }
  double dz() const { return z_max() / nz; }
  double dv() const { return v_max() / nt; }
  double du() const { return u_max() / nz; }

  double x_center(int i) const { return (i + 0.5) * dx() - wall_width_m / 2.0; }
  double y_center(int j) const { return (j + 0.5) * dy() - wall_width_m / 2.0; }
  double z_center(int j) const { return (j + 1) * dz(); }
  double t_center(int k) const { return k * bin_width_s; }

  bool operator==(const GridSpec&) const = default;

  void validate() const {
    if (nx < 2 || ny < 2 || nt < 2 || nz < 2)
      throw DataError("GridSpec: all dims must be >= 2 (nx=" + std::to_string(nx) +
                      " ny=" + std::to_string(ny) + " nt=" + std::to_string(nt) +
                      " nz=" + std::to_string(nz) + ")");
    if (!(wall_width_m > 0.0) || !std::isfinite(wall_width_m))
      throw DataError("GridSpec: wall_width_m must be > 0");
    if (!(bin_width_s > 0.0) || !std::isfinite(bin_width_s))
      throw DataError("GridSpec: bin_width_s must be > 0");
  }
};

}  // namespace nlos
