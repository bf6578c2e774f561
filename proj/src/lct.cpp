#include "nlos/lct.hpp"

#include <complex>

#include "nlos/errors.hpp"
#include "nlos/fft3.hpp"

namespace nlos {

namespace {

void check_grid_match(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw DataError(std::string(what) + ": grid mismatch");
}

// Zero-padded copy of a (nx, ny, n2) volume into the (2nx, 2ny, 2n2) complex
// transform buffer.
std::vector<std::complex<double>> pad_to_buffer(const VolumeF& vol, int p0, int p1, int p2) {
  std::vector<std::complex<double>> buf(size_t(p0) * p1 * p2);
  for (Eigen::Index i = 0; i < vol.dim0(); ++i)
    for (Eigen::Index j = 0; j < vol.dim1(); ++j) {
      const float* src = vol.data() + (i * vol.dim1() + j) * vol.dim2();
      std::complex<double>* dst = buf.data() + (size_t(i) * p1 + j) * p2;
      for (Eigen::Index k = 0; k < vol.dim2(); ++k) dst[k] = src[k];
    }
  return buf;
}

VolumeF crop_from_buffer(const std::vector<std::complex<double>>& buf, int p1, int p2, int n0,
                         int n1, int n2) {
  VolumeF out(n0, n1, n2);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const std::complex<double>* src = buf.data() + (size_t(i) * p1 + j) * p2;
      float* dst = out.data() + (size_t(i) * n1 + j) * n2;
      for (int k = 0; k < n2; ++k) dst[k] = static_cast<float>(src[k].real());
    }
  return out;
}

void check_spectrum(const PsfSpectrum& spectrum, const GridSpec& grid, const char* what) {
  check_grid_match(spectrum.grid, grid, what);
  if (spectrum.n0 != 2 * grid.nx || spectrum.n1 != 2 * grid.ny || spectrum.n2 != 2 * grid.nt)
    throw DataError(std::string(what) + ": spectrum shape does not match padded grid");
}

}  // namespace

ReflectanceVolume resample_time(const TransientImage& tau) {
  tau.validate();
  ReflectanceVolume out;
  out.grid = tau.grid;
  out.axis_kind = AxisKind::UUniform;
  out.data = resample_time_volume(tau.data, tau.grid, tau.grid.nt);
  return out;
}

TransientImage resample_time_inverse(const ReflectanceVolume& tilde_tau) {
  if (tilde_tau.axis_kind != AxisKind::UUniform)
    throw DataError("resample_time_inverse: expected a v-domain volume");
  TransientImage out;
  out.grid = tilde_tau.grid;
  out.data = resample_time_inverse_volume(tilde_tau.data, tilde_tau.grid,
                                          int(tilde_tau.data.dim2()));
  return out;
}

ReflectanceVolume resample_depth(const ReflectanceVolume& rho) {
  if (rho.axis_kind != AxisKind::ZUniform)
    throw DataError("resample_depth: expected a Z-uniform volume");
  rho.validate();
  ReflectanceVolume out;
  out.grid = rho.grid;
  out.axis_kind = AxisKind::UUniform;
  out.data = resample_depth_volume(rho.data, rho.grid, rho.grid.nz);
  return out;
}

ReflectanceVolume resample_depth_inverse(const ReflectanceVolume& rho_u) {
  if (rho_u.axis_kind != AxisKind::UUniform)
    throw DataError("resample_depth_inverse: expected a U-uniform volume");
  ReflectanceVolume out;
  out.grid = rho_u.grid;
  out.axis_kind = AxisKind::ZUniform;
  out.data = resample_depth_inverse_volume(rho_u.data, rho_u.grid, int(rho_u.data.dim2()));
  return out;
}

TransientImage forward_project(const ReflectanceVolume& rho, const PsfSpectrum& spectrum,
                               const ForwardOptions& options) {
  if (rho.axis_kind != AxisKind::ZUniform)
    throw DataError("forward_project: expected a Z-uniform volume");
  const GridSpec& g = rho.grid;
  g.validate();
  check_spectrum(spectrum, g, "forward_project");
  if (rho.data.dim0() != g.nx || rho.data.dim1() != g.ny || rho.data.dim2() != g.nz)
    throw DataError("forward_project: volume shape does not match grid");

  // R_z straight onto the nt-bin v lattice, so nz != nt grids work too; for
  // nz == nt this is exactly the u lattice.
  VolumeF rho_v = resample_depth_volume(rho.data, g, g.nt);

  const int p0 = 2 * g.nx, p1 = 2 * g.ny, p2 = 2 * g.nt;
  auto buf = pad_to_buffer(rho_v, p0, p1, p2);
  fft3(buf, p0, p1, p2);
  for (size_t i = 0; i < buf.size(); ++i) buf[i] *= spectrum.data[i];
  ifft3(buf, p0, p1, p2);

  VolumeF tilde = crop_from_buffer(buf, p1, p2, g.nx, g.ny, g.nt);

  TransientImage out;
  out.grid = g;
  out.data = resample_time_inverse_volume(tilde, g, g.nt);
  if (options.clamp_nonnegative) out.data.array() = out.data.array().max(0.0f);
  return out;
}

TransientImage forward_project(const ReflectanceVolume& rho, const Psf& psf,
                               const ForwardOptions& options) {
  return forward_project(rho, psf_spectrum(psf), options);
}

ReflectanceVolume wiener_reconstruct(const TransientImage& tau, const PsfSpectrum& spectrum,
                                     double alpha, const CorrectionVolume* correction) {
  if (!(alpha > 0.0)) throw ConfigError("wiener_reconstruct: alpha must be > 0");
  tau.validate();
  const GridSpec& g = tau.grid;
  check_spectrum(spectrum, g, "wiener_reconstruct");

  const int p0 = 2 * g.nx, p1 = 2 * g.ny, p2 = 2 * g.nt;
  if (correction &&
      (correction->data.dim0() != p0 || correction->data.dim1() != p1 ||
       correction->data.dim2() != p2))
    throw DataError("wiener_reconstruct: correction shape (" +
                    std::to_string(correction->data.dim0()) + "," +
                    std::to_string(correction->data.dim1()) + "," +
                    std::to_string(correction->data.dim2()) + ") does not match filter (" +
                    std::to_string(p0) + "," + std::to_string(p1) + "," + std::to_string(p2) +
                    ")");

  VolumeF tilde = resample_time_volume(tau.data, g, g.nt);
  auto buf = pad_to_buffer(tilde, p0, p1, p2);
  fft3(buf, p0, p1, p2);

  const double noise = 1.0 / alpha;
  for (size_t i = 0; i < buf.size(); ++i) {
    const std::complex<double> h = spectrum.data[i];
    std::complex<double> w = std::conj(h) / (std::norm(h) + noise);
    if (correction) w += double(correction->data.data()[i]);
    buf[i] *= w;
  }
  ifft3(buf, p0, p1, p2);

  VolumeF g_v = crop_from_buffer(buf, p1, p2, g.nx, g.ny, g.nt);

  ReflectanceVolume out;
  out.grid = g;
  out.axis_kind = AxisKind::ZUniform;
  out.data = resample_depth_inverse_volume(g_v, g, g.nt);
  out.data.array() = out.data.array().max(0.0f);
  return out;
}

ReflectanceVolume wiener_reconstruct(const TransientImage& tau, const Psf& psf, double alpha,
                                     const CorrectionVolume* correction) {
  return wiener_reconstruct(tau, psf_spectrum(psf), alpha, correction);
}

HeatMap2D depth_max_project(const ReflectanceVolume& rho) {
  if (rho.axis_kind != AxisKind::ZUniform)
    throw DataError("depth_max_project: expected a Z-uniform volume");
  HeatMap2D map;
  map.collapsed_axis = "z";
  map.data.resize(rho.data.dim0(), rho.data.dim1());
  for (Eigen::Index i = 0; i < rho.data.dim0(); ++i)
    for (Eigen::Index j = 0; j < rho.data.dim1(); ++j)
      map.data(i, j) = rho.data.column(i, j).maxCoeff();
  return map;
}

}  // namespace nlos
