#include "nlos/nlvt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>

#include "nlos/png_io.hpp"

static_assert(std::endian::native == std::endian::little,
              "NLVT I/O assumes a little-endian host");

namespace nlos {

namespace {

struct RawHeader {
  VolumeKind kind;
  uint32_t dims[3];
  double wall_width_m;
  double bin_width_s;
  double t_start;
  double meters_per_unit;
};

void write_raw(const RawHeader& h, const float* payload, size_t count,
               const std::filesystem::path& path) {
  for (size_t i = 0; i < count; ++i)
    if (!std::isfinite(payload[i]))
      throw DataError("refusing to write non-finite entry to " + path.string());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path.string());

  char header[kNlvtHeaderBytes] = {};
  std::memcpy(header, "NLVT", 4);
  header[4] = static_cast<char>(kNlvtVersion);
  header[5] = static_cast<char>(h.kind);
  std::memcpy(header + 8, h.dims, 12);
  double floats[5] = {h.wall_width_m, h.bin_width_s, h.t_start, h.meters_per_unit, 0.0};
  std::memcpy(header + 20, floats, 40);
  out.write(header, sizeof(header));
  out.write(reinterpret_cast<const char*>(payload), static_cast<std::streamsize>(count * 4));
  if (!out) throw DataError("write failed: " + path.string());
}

RawHeader read_raw(std::ifstream& in, const std::filesystem::path& path) {
  char header[kNlvtHeaderBytes];
  in.read(header, sizeof(header));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(header)))
    throw DataError("NLVT header truncated: " + path.string());
  if (std::memcmp(header, "NLVT", 4) != 0)
    throw DataError("bad magic (not an NLVT file): " + path.string());
  if (header[4] != static_cast<char>(kNlvtVersion))
    throw DataError("unsupported NLVT version " + std::to_string(int(header[4])) + ": " +
                    path.string());
  const uint8_t kind = static_cast<uint8_t>(header[5]);
  if (kind > static_cast<uint8_t>(VolumeKind::Depth))
    throw DataError("unknown NLVT kind " + std::to_string(int(kind)) + ": " + path.string());
  if (header[6] != 0 || header[7] != 0)
    throw DataError("reserved NLVT header bytes must be 0: " + path.string());

  RawHeader h{};
  h.kind = static_cast<VolumeKind>(kind);
  std::memcpy(h.dims, header + 8, 12);
  double floats[5];
  std::memcpy(floats, header + 20, 40);
  h.wall_width_m = floats[0];
  h.bin_width_s = floats[1];
  h.t_start = floats[2];
  h.meters_per_unit = floats[3];
  if (h.dims[0] == 0 || h.dims[1] == 0 || h.dims[2] == 0)
    throw DataError("NLVT dims must be nonzero: " + path.string());
  return h;
}

std::vector<float> read_payload(std::ifstream& in, const RawHeader& h,
                                const std::filesystem::path& path) {
  const size_t count = size_t(h.dims[0]) * h.dims[1] * h.dims[2];
  std::vector<float> payload(count);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(count * 4));
  if (in.gcount() != static_cast<std::streamsize>(count * 4))
    throw DataError("NLVT payload truncated: expected " + std::to_string(count * 4) +
                    " bytes, got " + std::to_string(in.gcount()) + ": " + path.string());
  char extra;
  if (in.read(&extra, 1))
    throw DataError("NLVT payload has trailing bytes: " + path.string());
  return payload;
}

// A file header cannot carry both nt and nz, so readers reconstruct the
// square-lattice grid the pipeline uses (nt == nz). The transient kind keeps
// its own nt and assumes nz = nt; reflectance kinds assume nt = nz.
GridSpec grid_from_header(const RawHeader& h) {
  GridSpec g;
  g.nx = static_cast<int>(h.dims[0]);
  g.ny = static_cast<int>(h.dims[1]);
  g.nt = static_cast<int>(h.dims[2]);
  g.nz = static_cast<int>(h.dims[2]);
  g.wall_width_m = h.wall_width_m;
  g.bin_width_s = h.bin_width_s;
  return g;
}

}  // namespace

void write_volume(const TransientImage& vol, const std::filesystem::path& path) {
  vol.validate();
  RawHeader h{VolumeKind::Transient,
              {uint32_t(vol.grid.nx), uint32_t(vol.grid.ny), uint32_t(vol.grid.nt)},
              vol.grid.wall_width_m,
              vol.grid.bin_width_s,
              vol.t_start,
              0.0};
  write_raw(h, vol.data.data(), size_t(vol.data.size()), path);
}

void write_volume(const ReflectanceVolume& vol, const std::filesystem::path& path) {
  vol.validate();
  RawHeader h{vol.axis_kind == AxisKind::ZUniform ? VolumeKind::ReflectanceZ
                                                  : VolumeKind::ReflectanceU,
              {uint32_t(vol.data.dim0()), uint32_t(vol.data.dim1()), uint32_t(vol.data.dim2())},
              vol.grid.wall_width_m,
              vol.grid.bin_width_s,
              0.0,
              0.0};
  write_raw(h, vol.data.data(), size_t(vol.data.size()), path);
}

void write_volume(const HeatMap2D& vol, const std::filesystem::path& path) {
  vol.validate();
  RawHeader h{VolumeKind::HeatMap,
              {uint32_t(vol.data.rows()), uint32_t(vol.data.cols()), 1},
              0.0,
              0.0,
              0.0,
              0.0};
  // x outermost: walk rows (x) in the outer loop.
  std::vector<float> payload(size_t(vol.data.size()));
  size_t at = 0;
  for (Eigen::Index x = 0; x < vol.data.rows(); ++x)
    for (Eigen::Index y = 0; y < vol.data.cols(); ++y) payload[at++] = vol.data(x, y);
  write_raw(h, payload.data(), payload.size(), path);
}

void write_volume(const DepthMap& vol, const std::filesystem::path& path) {
  vol.validate();
  RawHeader h{VolumeKind::Depth,
              {uint32_t(vol.grid.nx), uint32_t(vol.grid.ny), 1},
              vol.grid.wall_width_m,
              vol.grid.bin_width_s,
              0.0,
              1.0};  // payload already in meters
  std::vector<float> payload(size_t(vol.data.size()));
  size_t at = 0;
  for (Eigen::Index x = 0; x < vol.data.rows(); ++x)
    for (Eigen::Index y = 0; y < vol.data.cols(); ++y) payload[at++] = vol.data(x, y);
  write_raw(h, payload.data(), payload.size(), path);
}

void write_volume(const AnyVolume& vol, const std::filesystem::path& path) {
  std::visit([&](const auto& v) { write_volume(v, path); }, vol);
}

AnyVolume read_volume(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  const RawHeader h = read_raw(in, path);
  const std::vector<float> payload = read_payload(in, h, path);

  switch (h.kind) {
    case VolumeKind::Transient: {
      TransientImage t;
      t.grid = grid_from_header(h);
      t.t_start = h.t_start;
      t.data = VolumeF(h.dims[0], h.dims[1], h.dims[2]);
      std::copy(payload.begin(), payload.end(), t.data.data());
      return t;
    }
    case VolumeKind::ReflectanceZ:
    case VolumeKind::ReflectanceU: {
      ReflectanceVolume r;
      r.grid = grid_from_header(h);
      r.axis_kind = h.kind == VolumeKind::ReflectanceZ ? AxisKind::ZUniform : AxisKind::UUniform;
      r.data = VolumeF(h.dims[0], h.dims[1], h.dims[2]);
      std::copy(payload.begin(), payload.end(), r.data.data());
      return r;
    }
    case VolumeKind::HeatMap: {
      HeatMap2D m;
      m.data.resize(h.dims[0], h.dims[1]);
      size_t at = 0;
      for (uint32_t x = 0; x < h.dims[0]; ++x)
        for (uint32_t y = 0; y < h.dims[1]; ++y) m.data(x, y) = payload[at++];
      return m;
    }
    case VolumeKind::Depth: {
      DepthMap d;
      d.grid = grid_from_header(h);
      d.data.resize(h.dims[0], h.dims[1]);
      size_t at = 0;
      for (uint32_t x = 0; x < h.dims[0]; ++x)
        for (uint32_t y = 0; y < h.dims[1]; ++y)
          d.data(x, y) = payload[at++] * static_cast<float>(h.meters_per_unit);
      return d;
    }
  }
  throw DataError("unreachable NLVT kind");
}

TransientImage read_transient(const std::filesystem::path& path) {
  AnyVolume v = read_volume(path);
  if (auto* t = std::get_if<TransientImage>(&v)) return std::move(*t);
  throw DataError("expected transient NLVT kind: " + path.string());
}

ReflectanceVolume read_reflectance(const std::filesystem::path& path) {
  AnyVolume v = read_volume(path);
  if (auto* r = std::get_if<ReflectanceVolume>(&v)) return std::move(*r);
  throw DataError("expected reflectance NLVT kind: " + path.string());
}

DepthMap read_depth_map(const std::filesystem::path& path, const GridSpec& grid,
                        double meters_per_unit) {
  grid.validate();
  if (!(meters_per_unit > 0.0)) throw ConfigError("meters_per_unit must be > 0");

  DepthMap out;
  out.grid = grid;

  if (is_png_file(path)) {
    const auto img = read_png16(path);
    if (img.rows() != grid.nx || img.cols() != grid.ny)
      throw DataError("depth image is " + std::to_string(img.rows()) + "x" +
                      std::to_string(img.cols()) + ", grid wants " + std::to_string(grid.nx) +
                      "x" + std::to_string(grid.ny) + ": " + path.string());
    out.data = img.cast<float>() * static_cast<float>(meters_per_unit);
  } else {
    AnyVolume v = read_volume(path);
    auto* d = std::get_if<DepthMap>(&v);
    if (!d) throw DataError("expected depth NLVT kind or 16-bit PNG: " + path.string());
    if (d->data.rows() != grid.nx || d->data.cols() != grid.ny)
      throw DataError("depth map shape mismatch: " + path.string());
    out.data = d->data;
  }

  const float zmax = static_cast<float>(grid.z_max());
  out.data = (out.data > zmax).select(zmax, out.data);
  return out;
}

std::string frame_file_name(size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06zu.nlvt", index);
  return buf;
}

void write_sequence(const FrameSequence& seq, const std::filesystem::path& dir) {
  seq.validate();
  std::filesystem::create_directories(dir);
  for (size_t i = 0; i < seq.frames.size(); ++i)
    write_volume(seq.frames[i], dir / frame_file_name(i));
}

FrameSequence read_sequence(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw DataError("not a sequence directory: " + dir.string());
  std::map<std::string, std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".nlvt")
      files.emplace(entry.path().filename().string(), entry.path());
  if (files.empty()) throw DataError("no .nlvt frames in " + dir.string());

  FrameSequence seq;
  for (const auto& [name, path] : files) seq.frames.push_back(read_transient(path));
  if (seq.frames.size() > 1)
    seq.rate_hz = 1.0 / (seq.frames[1].t_start - seq.frames[0].t_start);
  seq.validate();
  return seq;
}

}  // namespace nlos
