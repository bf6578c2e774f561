#pragma once

#include "nlos/volume.hpp"

namespace nlos {

enum class ScanOrder { RowMajor, Serpentine };

// Per-point timing of one confocal raster scan: every wall point is visited
// once per frame, dwell apart, x fastest within a row.
struct RasterSchedule {
  GridSpec grid;
  double scan_rate_hz = 4.0;
  ScanOrder order = ScanOrder::RowMajor;

  double dwell_s() const { return 1.0 / (scan_rate_hz * grid.nx * grid.ny); }

  int point_index(int ix, int iy) const {
    const int col = (order == ScanOrder::Serpentine && (iy % 2) == 1) ? grid.nx - 1 - ix : ix;
    return iy * grid.nx + col;
  }
  double offset_s(int ix, int iy) const { return point_index(ix, iy) * dwell_s(); }
};

RasterSchedule build_schedule(const GridSpec& grid, double scan_rate_hz,
                              ScanOrder order = ScanOrder::RowMajor);

// Simulates raster-scanned acquisition: output frame k starts at
// k / scan_rate and copies each column from the high-rate frame active at
// that column's scan time. Columns are copied verbatim, never interpolated.
FrameSequence downsample_to_scan_rate(const FrameSequence& frames_hi,
                                      const RasterSchedule& sched);

// Reassembles scan columns into overlapping higher-rate frames: output frame
// j spans [j/out_rate, j/out_rate + 1/scan_rate) and takes each column from
// the capture whose scan time for that point falls in the span. Output
// truncates at the coverage boundary.
FrameSequence upsample_to_policy_rate(const FrameSequence& frames_lo,
                                      const RasterSchedule& sched, double out_rate_hz = 30.0);

}  // namespace nlos
