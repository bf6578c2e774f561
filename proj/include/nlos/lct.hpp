#pragma once

#include <cmath>
#include <vector>

#include "nlos/psf.hpp"
#include "nlos/volume.hpp"

namespace nlos {

// Confocal image formation and its inversion, all in the squared coordinates
// u = z^2, v = (t c / 2)^2 where the model is a 3D convolution against the
// hypercone PSF. Interpolation is linear; out-of-range reads return 0; the
// singular u = 0 / v = 0 / t = 0 bins are zeroed on the forward resamplings.

// Additive correction applied to the Wiener filter before use, on the padded
// spectrum lattice (2nx, 2ny, 2nt). A zero volume is the identity hook.
struct CorrectionVolume {
  VolumeF data;
};

struct ForwardOptions {
  // Interpolation can produce small negative excursions; production output
  // zeroes them. Tests of strict linearity disable the clamp.
  bool clamp_nonnegative = true;
};


// --- scalar-generic resampling kernels -------------------------------------
//
// Each kernel evaluates its defining formula at `oversample` quadrature
// points spread across the destination bin and averages them. oversample = 1
// (the default, used by the composed pipeline) is the plain midpoint rule,
// i.e. the operator definitions verbatim; higher factors give bin-integrated
// variants for callers whose content is narrow against the lattice.

// Linear interpolation at fractional bin position `pos`; reads outside
// [0, n) contribute 0.
template <typename Derived>
double interp_linear(const Eigen::ArrayBase<Derived>& col, double pos) {
  const Eigen::Index n = col.size();
  const double fl = std::floor(pos);
  const Eigen::Index i0 = static_cast<Eigen::Index>(fl);
  const double f = pos - fl;
  const double v0 = (i0 >= 0 && i0 < n) ? static_cast<double>(col[i0]) : 0.0;
  const double v1 = (i0 + 1 >= 0 && i0 + 1 < n) ? static_cast<double>(col[i0 + 1]) : 0.0;
  return v0 * (1.0 - f) + v1 * f;
}

// Quadrature offsets within one destination bin, in bin units around the
// bin center.
inline std::vector<double> bin_quadrature_offsets(int oversample) {
  std::vector<double> offsets(std::max(1, oversample));
  const int n = int(offsets.size());
  for (int s = 0; s < n; ++s) offsets[s] = -0.5 + (s + 0.5) / n;
  return offsets;
}

// t -> v: out_l = v_l^{3/2} * tau(t = 2 sqrt(v_l) / c). n_out bins of width
// v_max/n_out; the v = 0 bin is 0.
template <typename S>
Volume3<S> resample_time_volume(const Volume3<S>& tau, const GridSpec& grid, int n_out,
                                int oversample = 1) {
  Volume3<S> out(tau.dim0(), tau.dim1(), n_out);
  const int nt = grid.nt;
  const double dv = grid.v_max() / n_out;
  const auto offsets = bin_quadrature_offsets(oversample);

  std::vector<double> tpos, scale;
  for (int l = 1; l < n_out; ++l)
    for (const double off : offsets) {
      const double vbin = l + off;
      // t in bin units: 2 sqrt(v) / (c dt) = sqrt(vbin * nt^2 / n_out)
      tpos.push_back(std::sqrt(vbin * nt * nt / n_out));
      scale.push_back(std::pow(vbin * dv, 1.5) / double(offsets.size()));
    }

  for (Eigen::Index i = 0; i < tau.dim0(); ++i)
    for (Eigen::Index j = 0; j < tau.dim1(); ++j) {
      auto src = tau.column(i, j);
      auto dst = out.column(i, j);
      size_t at = 0;
      for (int l = 1; l < n_out; ++l) {
        double acc = 0.0;
        for (size_t s = 0; s < offsets.size(); ++s, ++at)
          acc += scale[at] * interp_linear(src, tpos[at]);
        dst[l] = static_cast<S>(acc);
      }
    }
  return out;
}

// v -> t: out_k = tilde(v = (t_k c / 2)^2) / v^{3/2}; the t = 0 bin is 0.
template <typename S>
Volume3<S> resample_time_inverse_volume(const Volume3<S>& tilde, const GridSpec& grid,
                                        int n_in, int oversample = 1) {
  Volume3<S> out(tilde.dim0(), tilde.dim1(), grid.nt);
  const int nt = grid.nt;
  const double dv = grid.v_max() / n_in;
  const auto offsets = bin_quadrature_offsets(oversample);

  std::vector<double> vpos, scale;
  for (int k = 1; k < nt; ++k)
    for (const double off : offsets) {
      const double tbin = k + off;
      const double pos = tbin * tbin * n_in / (double(nt) * nt);
      vpos.push_back(pos);
      scale.push_back(1.0 / (std::pow(pos * dv, 1.5) * double(offsets.size())));
    }

  for (Eigen::Index i = 0; i < tilde.dim0(); ++i)
    for (Eigen::Index j = 0; j < tilde.dim1(); ++j) {
      auto src = tilde.column(i, j);
      auto dst = out.column(i, j);
      size_t at = 0;
      for (int k = 1; k < nt; ++k) {
        double acc = 0.0;
        for (size_t s = 0; s < offsets.size(); ++s, ++at)
          acc += scale[at] * interp_linear(src, vpos[at]);
        dst[k] = static_cast<S>(acc);
      }
    }
  return out;
}

// z -> u: out_m = rho(z = sqrt(u_m)) / (2 sqrt(u_m)). n_out bins of width
// u_max/n_out; the u = 0 bin is 0.
template <typename S>
Volume3<S> resample_depth_volume(const Volume3<S>& rho, const GridSpec& grid, int n_out,
                                 int oversample = 1) {
  Volume3<S> out(rho.dim0(), rho.dim1(), n_out);
  const double du = grid.u_max() / n_out;
  const double dz = grid.dz();
  const auto offsets = bin_quadrature_offsets(oversample);

  std::vector<double> zpos, scale;
  for (int m = 1; m < n_out; ++m)
    for (const double off : offsets) {
      const double u = (m + off) * du;
      zpos.push_back(std::sqrt(u) / dz - 1.0);  // z_j = (j + 1) dz
      scale.push_back(1.0 / (2.0 * std::sqrt(u) * double(offsets.size())));
    }

  for (Eigen::Index i = 0; i < rho.dim0(); ++i)
    for (Eigen::Index j = 0; j < rho.dim1(); ++j) {
      auto src = rho.column(i, j);
      auto dst = out.column(i, j);
      size_t at = 0;
      for (int m = 1; m < n_out; ++m) {
        double acc = 0.0;
        for (size_t s = 0; s < offsets.size(); ++s, ++at)
          acc += scale[at] * interp_linear(src, zpos[at]);
        dst[m] = static_cast<S>(acc);
      }
    }
  return out;
}

// u -> z: out_j = 2 sqrt(u) * rho_u(u = z_j^2), evaluated at the strictly
// positive bin centers z_j = (j + 1) dz.
template <typename S>
Volume3<S> resample_depth_inverse_volume(const Volume3<S>& rho_u, const GridSpec& grid,
                                         int n_in, int oversample = 1) {
  Volume3<S> out(rho_u.dim0(), rho_u.dim1(), grid.nz);
  const double du = grid.u_max() / n_in;
  const double dz = grid.dz();
  const auto offsets = bin_quadrature_offsets(oversample);

  std::vector<double> upos, scale;
  for (int j = 0; j < grid.nz; ++j)
    for (const double off : offsets) {
      const double z = (j + 1 + off) * dz;
      upos.push_back(z * z / du);
      scale.push_back(2.0 * z / double(offsets.size()));
    }

  for (Eigen::Index i = 0; i < rho_u.dim0(); ++i)
    for (Eigen::Index jj = 0; jj < rho_u.dim1(); ++jj) {
      auto src = rho_u.column(i, jj);
      auto dst = out.column(i, jj);
      size_t at = 0;
      for (int j = 0; j < grid.nz; ++j) {
        double acc = 0.0;
        for (size_t s = 0; s < offsets.size(); ++s, ++at)
          acc += scale[at] * interp_linear(src, upos[at]);
        dst[j] = static_cast<S>(acc);
      }
    }
  return out;
}


// --- spec-level operations --------------------------------------------------

// R_t resampling of a transient onto the nt-bin v lattice.
ReflectanceVolume resample_time(const TransientImage& tau);

// Inverse of resample_time back onto the t lattice.
TransientImage resample_time_inverse(const ReflectanceVolume& tilde_tau);

// R_z resampling of a Z-uniform volume onto the nz-bin u lattice.
ReflectanceVolume resample_depth(const ReflectanceVolume& rho);

// Inverse of resample_depth back onto the z lattice.
ReflectanceVolume resample_depth_inverse(const ReflectanceVolume& rho_u);

// tau = R_t^{-1} F^{-1} H F R_z rho, zero-padded to (2nx, 2ny, 2nt) so the
// circular convolution acts linearly, then cropped.
TransientImage forward_project(const ReflectanceVolume& rho, const PsfSpectrum& spectrum,
                               const ForwardOptions& options = {});
TransientImage forward_project(const ReflectanceVolume& rho, const Psf& psf,
                               const ForwardOptions& options = {});

// rho* = R_z^{-1} F^{-1} [H* / (|H|^2 + 1/alpha) + correction] F R_t tau.
// Negative voxels are clamped to 0; a null correction means none.
ReflectanceVolume wiener_reconstruct(const TransientImage& tau, const PsfSpectrum& spectrum,
                                     double alpha,
                                     const CorrectionVolume* correction = nullptr);
ReflectanceVolume wiener_reconstruct(const TransientImage& tau, const Psf& psf, double alpha,
                                     const CorrectionVolume* correction = nullptr);

// Max pooling across the depth axis: out(x, y) = max_z rho(x, y, z).
HeatMap2D depth_max_project(const ReflectanceVolume& rho);

}  // namespace nlos
