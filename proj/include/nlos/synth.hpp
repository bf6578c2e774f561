#pragma once

#include <cstdint>
#include <vector>

#include "nlos/lct.hpp"
#include "nlos/volume.hpp"

namespace nlos {

// Knobs for pseudo-transient synthesis and its value-level augmentations.
struct AugmentConfig {
  double albedo = 100.0;  // photon-scale constant written into occupied voxels
  double fwhm_ps = 70.0;  // temporal blur FWHM; 0 disables
  std::vector<double> shift_levels_m = {-0.5, -0.25, 0.0, 0.25, 0.5};
  bool poisson = true;
  uint64_t seed = 0;

  void validate() const {
    if (!(albedo > 0.0)) throw ConfigError("augment: albedo must be > 0");
    if (!(fwhm_ps >= 0.0)) throw ConfigError("augment: fwhm_ps must be >= 0");
    if (shift_levels_m.empty()) throw ConfigError("augment: shift level list is empty");
  }
};

// Voxelizes a depth map: the z-bin nearest d(x, y) receives `albedo`,
// sentinel pixels contribute nothing, depths outside (0, z_max] are skipped.
ReflectanceVolume depth_to_reflectance(const DepthMap& depth, double albedo);

// Per-voxel Poisson draw with mean equal to the voxel value; independent
// across voxels and reproducible from the seed.
TransientImage apply_poisson(const TransientImage& tau, uint64_t seed);

// Gaussian blur along t. sigma_bins = fwhm / (2 sqrt(2 ln 2) * bin_width);
// the kernel is truncated at +-4 sigma and renormalized. fwhm_ps = 0 is the
// identity.
TransientImage apply_temporal_blur(const TransientImage& tau, double fwhm_ps);
double gaussian_sigma_bins(double fwhm_ps, double bin_width_s);

// Biases every non-sentinel pixel by delta_m, clamped to (0, z_max]; pixels
// pushed to <= 0 become sentinels.
DepthMap shift_depth(const DepthMap& depth, double delta_m);

// Full per-frame synthesis: voxelize, forward-project, blur, then Poisson
// (in that order, blur before noise).
TransientImage synthesize_transient(const DepthMap& depth, const PsfSpectrum& spectrum,
                                    const AugmentConfig& cfg);

// One FrameSequence per shift level; frame seeds derive deterministically
// from (cfg.seed, level index, frame index), so the result is identical for
// any job count.
std::vector<FrameSequence> augment_dataset(const std::vector<DepthMap>& depth_seq,
                                           const PsfSpectrum& spectrum,
                                           const AugmentConfig& cfg, double rate_hz = 30.0,
                                           int jobs = 1);

}  // namespace nlos
