// Acceptance suite: one line per criterion, [PASS]/[FAIL], nonzero exit if
// anything fails. Every tolerance is pinned in code next to its check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "nlos/lct.hpp"
#include "nlos/nlvt.hpp"
#include "nlos/pose.hpp"
#include "nlos/rescan.hpp"
#include "nlos/synth.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace nlos;
using Clock = std::chrono::steady_clock;

namespace {

struct Runner {
  int failures = 0;

  void run(const std::string& name, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    const auto start = Clock::now();
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("[%s] %-22s %s (%.2f s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

ReflectanceVolume sparse_volume(const GridSpec& g, uint32_t seed, double occupancy, int z_lo,
                                int z_hi) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> xi(0, g.nx - 1), yi(0, g.ny - 1), zi(z_lo, z_hi);
  std::uniform_real_distribution<float> val(0.5f, 1.5f);
  ReflectanceVolume rho;
  rho.grid = g;
  rho.axis_kind = AxisKind::ZUniform;
  rho.data = VolumeF(g.nx, g.ny, g.nz);
  const long target = std::lround(occupancy * double(g.nx) * g.ny * g.nz);
  for (long n = 0; n < target; ++n) rho.data(xi(gen), yi(gen), zi(gen)) = val(gen);
  return rho;
}

// centered 5-joint pose used by the reward/metric fixtures
PoseFrame fixture_frame() {
  PoseFrame f;
  f.root_pos = Eigen::Vector3d(0.25, -0.5, 1.0);
  f.root_quat = Eigen::Quaterniond::Identity();
  for (const auto& name : {"spine", "neck", "left_elbow", "right_elbow", "left_knee"})
    f.joint_quats.emplace(name, Eigen::Quaterniond::Identity());
  f.joint_pos.emplace("root", f.root_pos);
  f.joint_pos.emplace("spine", Eigen::Vector3d(0.25, -0.5, 1.25));
  f.joint_pos.emplace("neck", Eigen::Vector3d(0.25, -0.5, 1.5));
  f.joint_pos.emplace("left_elbow", Eigen::Vector3d(0.5, -0.5, 1.25));
  for (const auto& name : end_effector_names())
    f.end_effectors.emplace(name, Eigen::Vector3d(0.125, 0.25, 0.5));
  f.lin_vel = Eigen::Vector3d(1.0, 0.0, 0.0);
  f.ang_vel = Eigen::Vector3d(0.0, 0.5, 0.0);
  f.joint_vel = Eigen::VectorXd::Zero(5);
  return f;
}

bool approx(double got, double want, double tol) { return std::abs(got - want) <= tol; }

// --- criteria ---------------------------------------------------------------

bool criterion_oracle(std::string& detail) {
  GridSpec g;
  g.nx = 8;
  g.ny = 8;
  g.nt = 16;
  g.nz = 16;
  g.wall_width_m = 1.5;
  g.bin_width_s = 0.8e-9;
  const PsfSpectrum spec = psf_spectrum(build_psf(g));

  const auto start = Clock::now();
  double worst = 0.0;
  const int cases = 20;
  for (uint32_t seed = 1; seed <= cases; ++seed) {
    const ReflectanceVolume rho = sparse_volume(g, seed, 0.04, 0, g.nz - 1);
    const TransientImage got = forward_project(rho, spec);
    const VolumeD want = oracle::forward_direct(rho.data.cast<double>(), g);
    worst = std::max(worst, testutil::rel_l2(got.data.cast<double>(), want));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();

  std::ostringstream os;
  os << cases << " volumes, worst rel L2 " << worst << " (<= 1e-3)";
  detail = os.str();
  return worst <= 1e-3 && secs < 60.0;
}

bool criterion_falloff(std::string& detail) {
  GridSpec g;  // 32x32x64, 0.25 ns
  const PsfSpectrum spec = psf_spectrum(build_psf(g));

  // depths m*dz with m^2/64 integer sit exactly on u-lattice points; the
  // shallowest such depth (m = 8, first u bin) is excluded because content
  // in the first v bin leaks into near-zero v reads where 1/v^{3/2} blows up
  std::vector<double> logz, logp;
  for (int m : {16, 32, 48}) {
    ReflectanceVolume rho;
    rho.grid = g;
    rho.axis_kind = AxisKind::ZUniform;
    rho.data = VolumeF(g.nx, g.ny, g.nz);
    rho.data(16, 16, m - 1) = 1.0f;
    const TransientImage tau = forward_project(rho, spec);
    logz.push_back(std::log(g.z_center(m - 1)));
    logp.push_back(std::log(double(tau.data.column(16, 16).maxCoeff())));
  }

  // least-squares slope
  const size_t n = logz.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += logz[i];
    sy += logp[i];
    sxx += logz[i] * logz[i];
    sxy += logz[i] * logp[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  std::ostringstream os;
  os << "log-log slope " << slope << " (want -4 +- 0.3)";
  detail = os.str();
  return approx(slope, -4.0, 0.3);
}

// Best honest configuration found for this criterion: a short-range capture
// (z_max ~ 0.71 m behind a 2 m wall) whose hypercone mostly stays inside the
// recorded window, and smooth sparse scenes at ~3% occupancy. Even so, the
// unrecorded cone tails (finite wall and finite time range) cap the
// noiseless fidelity of the near-inverse filter at alpha = 100 just below
// the stated threshold on some scenes; fidelity peaks around alpha 0.01-0.1
// instead.
bool criterion_inversion(std::string& detail) {
  GridSpec g;
  g.wall_width_m = 2.0;
  g.bin_width_s = 7.371e-11;  // z_max ~ 0.707 m
  const PsfSpectrum spec = psf_spectrum(build_psf(g));

  double worst = 1.0;
  double slowest = 0.0;
  std::ostringstream os;
  os << "NCC";
  for (uint32_t seed : {101u, 202u, 303u}) {
    std::mt19937 gen(seed);
    std::uniform_int_distribution<int> xi(11, 20), yi(11, 20), zi(24, 34);
    ReflectanceVolume rho;
    rho.grid = g;
    rho.axis_kind = AxisKind::ZUniform;
    rho.data = VolumeF(g.nx, g.ny, g.nz);
    const float sigma = 3.0f;
    const int radius = 7;
    for (int c = 0; c < 2; ++c) {
      const int cx = xi(gen), cy = yi(gen), cz = zi(gen);
      for (int a = -radius; a <= radius; ++a)
        for (int b = -radius; b <= radius; ++b)
          for (int d = -radius; d <= radius; ++d) {
            const int x = cx + a, y = cy + b, z = cz + d;
            if (x < 0 || x >= g.nx || y < 0 || y >= g.ny || z < 0 || z >= g.nz) continue;
            const float v = std::exp(-(a * a + b * b + d * d) / (2.0f * sigma * sigma));
            if (v > 0.1f) rho.data(x, y, z) = std::max(rho.data(x, y, z), v);
          }
    }
    long occupied = 0;
    for (Eigen::Index i = 0; i < rho.data.size(); ++i) occupied += rho.data.array()[i] != 0.0f;

    const auto start = Clock::now();
    const TransientImage tau = forward_project(rho, spec);
    const ReflectanceVolume rec = wiener_reconstruct(tau, spec, 100.0);
    slowest = std::max(slowest,
                       std::chrono::duration<double>(Clock::now() - start).count());
    const double corr = testutil::ncc(rec.data, rho.data);
    worst = std::min(worst, corr);
    os << " " << corr << " (occ " << 100.0 * double(occupied) / double(rho.data.size()) << "%)";
  }

  os << ", want every >= 0.9; slowest case " << slowest << " s (< 30)";
  detail = os.str();
  return worst >= 0.9 && slowest < 30.0;
}

bool criterion_shift(std::string& detail) {
  GridSpec g;
  g.nx = 8;
  g.ny = 8;
  g.nt = 64;
  g.nz = 64;
  g.wall_width_m = 1.0;
  g.bin_width_s = 0.25e-9;  // dt pinned by the criterion
  const PsfSpectrum spec = psf_spectrum(build_psf(g));

  AugmentConfig cfg;
  cfg.poisson = false;
  cfg.fwhm_ps = 0.0;

  DepthMap d;
  d.grid = g;
  d.data.resize(g.nx, g.ny);
  d.data.setZero();
  d.data(4, 4) = 0.9f;

  const TransientImage t0 = synthesize_transient(d, spec, cfg);
  const TransientImage t1 = synthesize_transient(shift_depth(d, 0.25), spec, cfg);

  const auto argmax = [&](const TransientImage& t) {
    int best = 0;
    for (int k = 1; k < g.nt; ++k)
      if (t.data(4, 4, k) > t.data(4, 4, best)) best = k;
    return best;
  };
  const long moved = argmax(t1) - argmax(t0);
  const long expect = std::lround(2.0 * 0.25 / (kSpeedOfLight * g.bin_width_s));

  std::ostringstream os;
  os << "peak moved " << moved << " bins, round(2*0.25/(c dt)) = " << expect;
  detail = os.str();
  return moved == expect;
}

bool criterion_blur(std::string& detail) {
  const double sigma = gaussian_sigma_bins(70.0, 32e-12);

  GridSpec g;
  g.nx = 8;
  g.ny = 8;
  g.nt = 64;
  g.nz = 64;
  g.wall_width_m = 1.0;
  g.bin_width_s = 32e-12;
  TransientImage tau;
  tau.grid = g;
  tau.data = VolumeF(g.nx, g.ny, g.nt);
  std::mt19937 gen(5);
  std::uniform_real_distribution<float> val(0.0f, 10.0f);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 8; k < g.nt - 8; ++k) tau.data(i, j, k) = val(gen);  // interior support

  const TransientImage out = apply_temporal_blur(tau, 70.0);
  const double sum_in = tau.data.array().cast<double>().sum();
  const double sum_out = out.data.array().cast<double>().sum();
  const double rel = std::abs(sum_out - sum_in) / sum_in;

  std::ostringstream os;
  os << "sigma_bins " << sigma << " (0.929 +- 0.001), sum drift " << rel << " (<= 1e-6)";
  detail = os.str();
  return approx(sigma, 0.929, 0.001) && rel <= 1e-6;
}

bool criterion_poisson(std::string& detail) {
  GridSpec g;
  g.nx = 10;
  g.ny = 10;
  g.nt = 100;
  g.nz = 100;
  TransientImage tau;
  tau.grid = g;
  tau.data = VolumeF(g.nx, g.ny, g.nt);
  tau.data.array() = 100.0f;  // 10^4 voxels at mean 100

  const TransientImage out = apply_poisson(tau, 424242);
  const double n = double(out.data.size());
  const double mean = out.data.array().cast<double>().sum() / n;
  const double var = (out.data.array().cast<double>() - mean).square().sum() / (n - 1.0);
  const double ratio = var / mean;

  std::ostringstream os;
  os << "mean " << mean << " (in [98,102]), var/mean " << ratio << " (in [0.9,1.1])";
  detail = os.str();
  return mean >= 98.0 && mean <= 102.0 && ratio >= 0.9 && ratio <= 1.1;
}

bool criterion_rescan(std::string& detail) {
  GridSpec g;
  g.nx = 8;
  g.ny = 8;
  g.nt = 8;
  g.nz = 8;
  g.wall_width_m = 1.0;
  g.bin_width_s = 1e-9;

  // static scene: 30 -> 4 -> 30 Hz must restore frames bit for bit
  const VolumeF pattern = testutil::random_volume(g.nx, g.ny, g.nt, 55);
  FrameSequence hi;
  hi.rate_hz = 30.0;
  for (int f = 0; f < 30; ++f) {
    TransientImage t;
    t.grid = g;
    t.t_start = f / 30.0;
    t.data = pattern;
    hi.frames.push_back(t);
  }
  const RasterSchedule sched = build_schedule(g, 4.0);
  const FrameSequence lo = downsample_to_scan_rate(hi, sched);
  const FrameSequence up = upsample_to_policy_rate(lo, sched, 30.0);
  bool bit_exact = !up.frames.empty();
  for (const auto& f : up.frames)
    for (Eigen::Index i = 0; i < f.data.size() && bit_exact; ++i)
      bit_exact = f.data.array()[i] == pattern.array()[i];

  // moving scene: the jump lands exactly at the schedule-predicted point
  FrameSequence moving;
  moving.rate_hz = 30.0;
  for (int f = 0; f < 30; ++f) {
    TransientImage t;
    t.grid = g;
    t.t_start = f / 30.0;
    t.data = VolumeF(g.nx, g.ny, g.nt);
    t.data.array().setConstant(f < 4 ? 1.0f : 2.0f);  // jump at t = 4/30 s
    moving.frames.push_back(t);
  }
  const FrameSequence mlo = downsample_to_scan_rate(moving, sched);
  const int cut = int(std::ceil((4.0 / 30.0) / sched.dwell_s() - 1e-9));
  bool jump_ok = true;
  for (int ix = 0; ix < g.nx && jump_ok; ++ix)
    for (int iy = 0; iy < g.ny && jump_ok; ++iy) {
      const float want = sched.point_index(ix, iy) < cut ? 1.0f : 2.0f;
      jump_ok = mlo.frames[0].data(ix, iy, 0) == want;
    }

  std::ostringstream os;
  os << "round trip bit-exact over " << up.frames.size() << " frames: " << (bit_exact ? "yes" : "no")
     << ", discontinuity at scan index " << cut << ": " << (jump_ok ? "yes" : "no");
  detail = os.str();
  return bit_exact && jump_ok;
}

bool criterion_rewards(std::string& detail) {
  const PoseFrame gt = fixture_frame();
  const RewardWeights weights;  // 0.5, 0.3, 0.1, 0.1

  bool ok = approx(reward_pose(gt, gt), 1.0, 1e-9) &&
            approx(reward_end_effector(gt, gt), 1.0, 1e-9) &&
            approx(reward_root_pose(gt, gt), 1.0, 1e-9) &&
            approx(reward_root_velocity(gt, gt), 1.0, 1e-9) &&
            approx(total_reward(gt, gt, weights), 1.0, 1e-9);

  PoseFrame joint_off = gt;
  joint_off.joint_quats["neck"] =
      Eigen::Quaterniond(Eigen::AngleAxisd(0.5, Eigen::Vector3d::UnitX()));
  ok = ok && approx(reward_pose(joint_off, gt), std::exp(-0.5), 1e-9);

  PoseFrame eff_off = gt;
  eff_off.end_effectors["left_hand"] += Eigen::Vector3d(0.1, 0, 0);
  ok = ok && approx(reward_end_effector(eff_off, gt), std::exp(-0.2), 1e-9);

  PoseFrame height_off = gt;
  height_off.root_pos.z() += 0.05;
  ok = ok && approx(reward_root_pose(height_off, gt), std::exp(-0.75), 1e-9);

  PoseFrame lin_off = gt;
  lin_off.lin_vel += Eigen::Vector3d(1, 0, 0);
  ok = ok && approx(reward_root_velocity(lin_off, gt), std::exp(-1.0), 1e-9);

  PoseFrame ang_off = gt;
  ang_off.ang_vel += Eigen::Vector3d(0, 0, 1);
  ok = ok && approx(reward_root_velocity(ang_off, gt), std::exp(-0.1), 1e-9);

  detail = "exact-match rewards = 1 and perturbation fixtures to 1e-9";
  return ok;
}

bool criterion_metrics(std::string& detail) {
  // MPJPE: constant global offset cancels exactly
  PoseSequence gt;
  gt.frames = {fixture_frame()};
  PoseSequence est = gt;
  est.frames[0].root_pos += Eigen::Vector3d(1.5, -2.0, 0.75);
  for (auto& [name, p] : est.frames[0].joint_pos) p += Eigen::Vector3d(1.5, -2.0, 0.75);
  const bool mpjpe_ok = mpjpe_mm(est, gt) == 0.0;

  // E_key: doubling raw estimate coordinates changes nothing
  Keypoints2D kg;
  kg.frames.resize(2);
  for (auto& frame : kg.frames) {
    frame["hip"] = Eigen::Vector2d(0.5, 1.0);
    frame["shoulder"] = Eigen::Vector2d(0.625, 1.5);
    frame["head"] = Eigen::Vector2d(0.5, 1.75);
    frame["left_wrist"] = Eigen::Vector2d(0.25, 1.25);
  }
  Keypoints2D ke = kg;
  ke.frames[0]["head"] += Eigen::Vector2d(0.125, 0.0);
  ke.frames[1]["left_wrist"] += Eigen::Vector2d(0.0, -0.25);
  const double base_err = keypoint_error_2d(ke, kg);
  Keypoints2D scaled = ke;
  for (auto& frame : scaled.frames)
    for (auto& [name, p] : frame) p *= 2.0;
  const bool ekey_ok = keypoint_error_2d(scaled, kg) == base_err && base_err > 0.0;

  // PPO boundary cases, exact
  const bool ppo_ok = ppo_clip_loss(1.5, 1.0, 0.2) == 1.2 &&
                      ppo_clip_loss(0.5, -1.0, 0.2) == -0.8 &&
                      ppo_clip_loss(1.5, -1.0, 0.2) == -1.5 &&
                      ppo_clip_loss(0.5, 1.0, 0.2) == 0.5;

  std::ostringstream os;
  os << "mpjpe shift-invariance " << (mpjpe_ok ? "exact" : "BROKEN") << ", e_key scale-invariance "
     << (ekey_ok ? "exact" : "BROKEN") << ", ppo boundaries " << (ppo_ok ? "exact" : "BROKEN");
  detail = os.str();
  return mpjpe_ok && ekey_ok && ppo_ok;
}

bool criterion_determinism(std::string& detail) {
  testutil::TempDir tmp("acceptance_synth");

  const auto config_path = tmp.path() / "config.txt";
  {
    std::ofstream cfg(config_path);
    cfg << "grid.nx = 8\ngrid.ny = 8\ngrid.nt = 64\ngrid.nz = 64\n"
           "grid.wall_width_m = 1.0\ngrid.bin_width_s = 0.25e-9\n"
           "augment.seed = 31337\naugment.poisson = true\n"
           "io.meters_per_unit = 0.001\n";
  }

  GridSpec g;
  g.nx = g.ny = 8;
  g.nt = g.nz = 64;
  g.wall_width_m = 1.0;
  g.bin_width_s = 0.25e-9;
  std::filesystem::create_directories(tmp.path() / "depth");
  for (int f = 0; f < 3; ++f) {
    DepthMap d;
    d.grid = g;
    d.data.resize(g.nx, g.ny);
    d.data.setZero();
    d.data(2 + f, 3) = 1.0f + 0.1f * f;
    char name[32];
    std::snprintf(name, sizeof(name), "d%03d.nlvt", f);
    write_volume(d, tmp.path() / "depth" / name);
  }

  std::ostringstream sink;
  for (const char* out : {"run1", "run2"}) {
    const int code = nlos::cli::run({"--config", config_path.string(), "--jobs", "2", "synth",
                                     "--depth-dir", (tmp.path() / "depth").string(), "--out-dir",
                                     (tmp.path() / out).string()},
                                    sink, sink);
    if (code != 0) {
      detail = "cmd_synth exited with " + std::to_string(code);
      return false;
    }
  }

  size_t files = 0;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(tmp.path() / "run1")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const auto rel = std::filesystem::relative(entry.path(), tmp.path() / "run1");
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb(tmp.path() / "run2" / rel, std::ios::binary);
    if (!fb.good()) {
      detail = "missing in run2: " + rel.string();
      return false;
    }
    const std::string a((std::istreambuf_iterator<char>(fa)), {});
    const std::string b((std::istreambuf_iterator<char>(fb)), {});
    if (a != b) {
      detail = "byte mismatch: " + rel.string();
      return false;
    }
  }

  std::ostringstream os;
  os << files << " files byte-identical across two runs";
  detail = os.str();
  return files > 0;
}

}  // namespace

int main() {
  Runner r;
  r.run("1 oracle-equivalence", criterion_oracle);
  r.run("2 radiometric-falloff", criterion_falloff);
  r.run("3 inversion-fidelity", criterion_inversion);
  r.run("4 shift-arithmetic", criterion_shift);
  r.run("5 blur-conservation", criterion_blur);
  r.run("6 poisson-statistics", criterion_poisson);
  r.run("7 rescan-fixed-point", criterion_rescan);
  r.run("8 reward-suite", criterion_rewards);
  r.run("9 metric-fixtures", criterion_metrics);
  r.run("10 synth-determinism", criterion_determinism);

  if (r.failures == 0) {
    std::printf("all 10 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", r.failures);
  return 1;
}
