#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nlos/errors.hpp"
#include "nlos/grid.hpp"

namespace nlos {

// Dense 3D grid of scalars. Storage is flat row-major with the LAST axis
// contiguous: flat(i, j, k) = (i * d1 + j) * d2 + k. This matches both the
// NLVT file payload order (x outermost, t/z innermost) and FFTW's row-major
// layout, so volumes can be handed to either without reshuffling.
template <typename Scalar>
class Volume3 {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Volume3() = default;
  Volume3(Eigen::Index d0, Eigen::Index d1, Eigen::Index d2)
      : d0_(d0), d1_(d1), d2_(d2), data_(Array::Zero(d0 * d1 * d2)) {}

  Eigen::Index dim0() const { return d0_; }
  Eigen::Index dim1() const { return d1_; }
  Eigen::Index dim2() const { return d2_; }
  Eigen::Index size() const { return data_.size(); }

  Scalar& operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) {
    return data_[(i * d1_ + j) * d2_ + k];
  }
  Scalar operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    return data_[(i * d1_ + j) * d2_ + k];
  }

  Array& array() { return data_; }
  const Array& array() const { return data_; }
  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }

  // Contiguous view of the innermost axis at lateral position (i, j).
  Eigen::Map<Array> column(Eigen::Index i, Eigen::Index j) {
    return Eigen::Map<Array>(data_.data() + (i * d1_ + j) * d2_, d2_);
  }
  Eigen::Map<const Array> column(Eigen::Index i, Eigen::Index j) const {
    return Eigen::Map<const Array>(data_.data() + (i * d1_ + j) * d2_, d2_);
  }

  bool same_shape(const Volume3& o) const {
    return d0_ == o.d0_ && d1_ == o.d1_ && d2_ == o.d2_;
  }
  bool all_finite() const { return data_.isFinite().all(); }

  template <typename Other>
  Volume3<Other> cast() const {
    Volume3<Other> out(d0_, d1_, d2_);
    out.array() = data_.template cast<Other>();
    return out;
  }

 private:
  Eigen::Index d0_ = 0, d1_ = 0, d2_ = 0;
  Array data_;
};

using VolumeF = Volume3<float>;
using VolumeD = Volume3<double>;

// Whether a reflectance volume's third axis is sampled uniformly in depth z
// (the physical domain) or in u = z^2 (the convolution domain).
enum class AxisKind : uint8_t { ZUniform, UUniform };

// One photon-count volume tau(x, y, t) plus the start time of the raster
// scan that produced it.
struct TransientImage {
  GridSpec grid;
  VolumeF data;  // (nx, ny, nt), photon counts >= 0
  double t_start = 0.0;

  void validate() const {
    grid.validate();
    if (data.dim0() != grid.nx || data.dim1() != grid.ny || data.dim2() != grid.nt)
      throw DataError("TransientImage: data shape does not match grid");
    if (!data.all_finite()) throw DataError("TransientImage: non-finite entry");
    if ((data.array() < 0.0f).any()) throw DataError("TransientImage: negative photon count");
  }
};

// Hidden-scene reflectivity rho(x, y, z), or its u-resampled form.
struct ReflectanceVolume {
  GridSpec grid;
  VolumeF data;  // (nx, ny, nz) for ZUniform; (nx, ny, nbins) for UUniform
  AxisKind axis_kind = AxisKind::ZUniform;

  void validate() const {
    grid.validate();
    if (data.dim0() <= 0 || data.dim1() <= 0 || data.dim2() <= 0)
      throw DataError("ReflectanceVolume: empty volume");
    if (!data.all_finite()) throw DataError("ReflectanceVolume: non-finite entry");
    if ((data.array() < 0.0f).any()) throw DataError("ReflectanceVolume: negative entry");
  }
};

// Per-wall-pixel distance of the hidden surface, in meters. 0 is the
// sentinel for "no hidden surface at this pixel".
struct DepthMap {
  GridSpec grid;
  Eigen::ArrayXXf data;  // (nx, ny) meters

  void validate() const {
    grid.validate();
    if (data.rows() != grid.nx || data.cols() != grid.ny)
      throw DataError("DepthMap: data shape does not match grid");
    if (!data.isFinite().all()) throw DataError("DepthMap: non-finite entry");
    if ((data < 0.0f).any()) throw DataError("DepthMap: negative depth");
    if ((data > float(grid.z_max())).any())
      throw DataError("DepthMap: depth beyond z_max");
  }
};

// 2D projection of a volume; each entry is the max over the collapsed axis.
struct HeatMap2D {
  Eigen::ArrayXXf data;
  std::string collapsed_axis = "z";

  void validate() const {
    if (data.size() == 0) throw DataError("HeatMap2D: empty map");
    if (!data.isFinite().all()) throw DataError("HeatMap2D: non-finite entry");
  }
};

// Ordered transient frames at a nominal fixed rate.
struct FrameSequence {
  std::vector<TransientImage> frames;
  double rate_hz = 30.0;

  void validate() const {
    if (frames.empty()) throw DataError("FrameSequence: empty sequence");
    if (!(rate_hz > 0.0)) throw DataError("FrameSequence: rate must be > 0");
    const double gap = 1.0 / rate_hz;
    for (size_t i = 1; i < frames.size(); ++i) {
      const double got = frames[i].t_start - frames[i - 1].t_start;
      if (std::abs(got - gap) > 1e-9)
        throw DataError("FrameSequence: frame " + std::to_string(i) + " t_start gap " +
                        std::to_string(got) + " s, expected " + std::to_string(gap) + " s");
    }
  }
};

}  // namespace nlos
