#include "nlos/synth.hpp"

#include <cmath>

#include "nlos/parallel.hpp"
#include "nlos/random.hpp"

namespace nlos {

ReflectanceVolume depth_to_reflectance(const DepthMap& depth, double albedo) {
  depth.validate();
  if (!(albedo > 0.0)) throw ConfigError("depth_to_reflectance: albedo must be > 0");
  const GridSpec& g = depth.grid;

  ReflectanceVolume out;
  out.grid = g;
  out.axis_kind = AxisKind::ZUniform;
  out.data = VolumeF(g.nx, g.ny, g.nz);

  const double dz = g.dz();
  const float zmax = static_cast<float>(g.z_max());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const float d = depth.data(i, j);
      if (d <= 0.0f || d > zmax) continue;  // sentinel or out of range
      // bins sit at (j + 1) dz; nearest bin, clamped to the first
      long bin = std::lround(d / dz) - 1;
      if (bin < 0) bin = 0;
      if (bin >= g.nz) bin = g.nz - 1;
      out.data(i, j, bin) = static_cast<float>(albedo);
    }
  return out;
}

TransientImage apply_poisson(const TransientImage& tau, uint64_t seed) {
  tau.validate();
  TransientImage out = tau;
  Rng rng(seed);
  float* p = out.data.data();
  const Eigen::Index n = out.data.size();
  for (Eigen::Index i = 0; i < n; ++i)
    p[i] = static_cast<float>(poisson_sample(rng, double(p[i])));
  return out;
}

double gaussian_sigma_bins(double fwhm_ps, double bin_width_s) {
  return (fwhm_ps * 1e-12) / (2.0 * std::sqrt(2.0 * std::log(2.0)) * bin_width_s);
}

TransientImage apply_temporal_blur(const TransientImage& tau, double fwhm_ps) {
  tau.validate();
  if (!(fwhm_ps >= 0.0)) throw ConfigError("apply_temporal_blur: fwhm_ps must be >= 0");
  if (fwhm_ps == 0.0) return tau;

  const double sigma = gaussian_sigma_bins(fwhm_ps, tau.grid.bin_width_s);
  const int radius = std::max(1, int(std::floor(4.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * (k / sigma) * (k / sigma));
    sum += kernel[k + radius];
  }
  for (double& v : kernel) v /= sum;

  TransientImage out = tau;
  const int nt = tau.grid.nt;
  std::vector<double> acc(nt);
  for (int i = 0; i < tau.grid.nx; ++i)
    for (int j = 0; j < tau.grid.ny; ++j) {
      auto src = tau.data.column(i, j);
      auto dst = out.data.column(i, j);
      for (int t = 0; t < nt; ++t) {
        double v = 0.0;
        const int lo = std::max(0, t - radius);
        const int hi = std::min(nt - 1, t + radius);
        for (int s = lo; s <= hi; ++s) v += kernel[t - s + radius] * src[s];
        acc[t] = v;
      }
      for (int t = 0; t < nt; ++t) dst[t] = static_cast<float>(acc[t]);
    }
  return out;
}

DepthMap shift_depth(const DepthMap& depth, double delta_m) {
  depth.validate();
  DepthMap out = depth;
  const float zmax = static_cast<float>(depth.grid.z_max());
  const float delta = static_cast<float>(delta_m);
  for (Eigen::Index i = 0; i < out.data.rows(); ++i)
    for (Eigen::Index j = 0; j < out.data.cols(); ++j) {
      const float d = out.data(i, j);
      if (d <= 0.0f) continue;  // sentinel stays put
      float shifted = d + delta;
      if (shifted <= 0.0f)
        shifted = 0.0f;  // pushed out through the wall: no surface
      else if (shifted > zmax)
        shifted = zmax;
      out.data(i, j) = shifted;
    }
  return out;
}

TransientImage synthesize_transient(const DepthMap& depth, const PsfSpectrum& spectrum,
                                    const AugmentConfig& cfg) {
  cfg.validate();
  ReflectanceVolume rho = depth_to_reflectance(depth, cfg.albedo);
  TransientImage tau = forward_project(rho, spectrum);
  if (cfg.fwhm_ps > 0.0) tau = apply_temporal_blur(tau, cfg.fwhm_ps);
  if (cfg.poisson) tau = apply_poisson(tau, cfg.seed);
  return tau;
}

std::vector<FrameSequence> augment_dataset(const std::vector<DepthMap>& depth_seq,
                                           const PsfSpectrum& spectrum,
                                           const AugmentConfig& cfg, double rate_hz, int jobs) {
  cfg.validate();
  if (depth_seq.empty()) throw DataError("augment_dataset: empty depth sequence");
  if (!(rate_hz > 0.0)) throw ConfigError("augment_dataset: rate must be > 0");

  const size_t levels = cfg.shift_levels_m.size();
  const size_t frames = depth_seq.size();

  std::vector<FrameSequence> out(levels);
  for (size_t level = 0; level < levels; ++level) {
    out[level].rate_hz = rate_hz;
    out[level].frames.resize(frames);
  }

  parallel_for(levels * frames, jobs, [&](size_t item) {
    const size_t level = item / frames;
    const size_t frame = item % frames;
    AugmentConfig frame_cfg = cfg;
    frame_cfg.seed = derive_seed(cfg.seed, level, frame);
    DepthMap shifted = shift_depth(depth_seq[frame], cfg.shift_levels_m[level]);
    TransientImage tau = synthesize_transient(shifted, spectrum, frame_cfg);
    tau.t_start = double(frame) / rate_hz;
    out[level].frames[frame] = std::move(tau);
  });
  return out;
}

}  // namespace nlos
