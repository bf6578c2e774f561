#include "nlos/rescan.hpp"

#include <cmath>
#include <string>

#include "nlos/errors.hpp"

namespace nlos {

namespace {

// Timing comparisons work in frame units with a slack far below one dwell,
// so exact boundary times land on the frame that starts there.
constexpr double kFrameEps = 1e-6;

void check_grid(const FrameSequence& seq, const RasterSchedule& sched, const char* what) {
  for (const auto& f : seq.frames)
    if (!(f.grid == sched.grid)) throw DataError(std::string(what) + ": frame grid mismatch");
}

}  // namespace

RasterSchedule build_schedule(const GridSpec& grid, double scan_rate_hz, ScanOrder order) {
  grid.validate();
  if (!(scan_rate_hz > 0.0)) throw ConfigError("build_schedule: scan rate must be > 0");
  return RasterSchedule{grid, scan_rate_hz, order};
}

FrameSequence downsample_to_scan_rate(const FrameSequence& frames_hi,
                                      const RasterSchedule& sched) {
  frames_hi.validate();
  check_grid(frames_hi, sched, "downsample_to_scan_rate");
  const GridSpec& g = sched.grid;
  const double hi_rate = frames_hi.rate_hz;
  const double t0 = frames_hi.frames.front().t_start;
  const size_t n_hi = frames_hi.frames.size();
  const double max_offset = (double(g.nx) * g.ny - 1.0) * sched.dwell_s();

  // First and last output frames whose whole scan interval is covered.
  const long k_first = long(std::ceil(t0 * sched.scan_rate_hz - kFrameEps));
  FrameSequence out;
  out.rate_hz = sched.scan_rate_hz;

  for (long k = k_first;; ++k) {
    const double start = double(k) / sched.scan_rate_hz;
    const double last_scan = start + max_offset;
    if ((last_scan - t0) * hi_rate + kFrameEps >= double(n_hi)) break;

    TransientImage frame;
    frame.grid = g;
    frame.t_start = start;
    frame.data = VolumeF(g.nx, g.ny, g.nt);
    for (int ix = 0; ix < g.nx; ++ix)
      for (int iy = 0; iy < g.ny; ++iy) {
        const double scan_time = start + sched.offset_s(ix, iy);
        const long src = long(std::floor((scan_time - t0) * hi_rate + kFrameEps));
        if (src < 0 || src >= long(n_hi))
          throw DataError("downsample_to_scan_rate: no source frame covers t=" +
                          std::to_string(scan_time) + " s");
        frame.data.column(ix, iy) = frames_hi.frames[size_t(src)].data.column(ix, iy);
      }
    out.frames.push_back(std::move(frame));
  }

  if (out.frames.empty())
    throw DataError("downsample_to_scan_rate: input covers no full scan interval (have [" +
                    std::to_string(t0) + ", " + std::to_string(t0 + double(n_hi) / hi_rate) +
                    ") s)");
  return out;
}

FrameSequence upsample_to_policy_rate(const FrameSequence& frames_lo,
                                      const RasterSchedule& sched, double out_rate_hz) {
  frames_lo.validate();
  check_grid(frames_lo, sched, "upsample_to_policy_rate");
  if (!(out_rate_hz > 0.0)) throw ConfigError("upsample_to_policy_rate: rate must be > 0");
  if (std::abs(frames_lo.rate_hz - sched.scan_rate_hz) > 1e-9)
    throw DataError("upsample_to_policy_rate: sequence rate " +
                    std::to_string(frames_lo.rate_hz) + " Hz does not match schedule rate " +
                    std::to_string(sched.scan_rate_hz) + " Hz");

  const GridSpec& g = sched.grid;
  const double t0 = frames_lo.frames.front().t_start;
  const size_t n_lo = frames_lo.frames.size();

  FrameSequence out;
  out.rate_hz = out_rate_hz;

  const long j_first = long(std::ceil(t0 * out_rate_hz - kFrameEps));
  for (long j = j_first;; ++j) {
    const double span_start = double(j) / out_rate_hz;

    TransientImage frame;
    frame.grid = g;
    frame.t_start = span_start;
    frame.data = VolumeF(g.nx, g.ny, g.nt);
    bool covered = true;
    for (int ix = 0; ix < g.nx && covered; ++ix)
      for (int iy = 0; iy < g.ny && covered; ++iy) {
        const double offset = sched.offset_s(ix, iy);
        // the unique capture whose scan time for this point enters the span
        const long k =
            long(std::ceil((span_start - offset - t0) * sched.scan_rate_hz - kFrameEps));
        if (k < 0 || k >= long(n_lo)) {
          covered = false;
          break;
        }
        frame.data.column(ix, iy) = frames_lo.frames[size_t(k)].data.column(ix, iy);
      }
    if (!covered) break;
    out.frames.push_back(std::move(frame));
  }

  if (out.frames.empty())
    throw DataError("upsample_to_policy_rate: no output frame has full coverage");
  return out;
}

}  // namespace nlos
