#include "nlos/pose.hpp"

#include <algorithm>
#include <cmath>

namespace nlos {

namespace {

void check_unit(const Eigen::Quaterniond& q, const char* what) {
  if (std::abs(q.norm() - 1.0) > 1e-3)
    throw DataError(std::string(what) + ": quaternion norm " + std::to_string(q.norm()) +
                    " is not unit");
}

template <typename Map>
void check_same_keys(const Map& a, const Map& b, const char* what) {
  if (a.size() != b.size())
    throw DataError(std::string(what) + ": mismatched sets (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end(); ++ia, ++ib)
    if (ia->first != ib->first)
      throw DataError(std::string(what) + ": key '" + ia->first + "' vs '" + ib->first + "'");
}

void check_lengths(const PoseSequence& a, const PoseSequence& b, const char* what) {
  if (a.frames.size() != b.frames.size())
    throw DataError(std::string(what) + ": sequence lengths differ (" +
                    std::to_string(a.frames.size()) + " vs " + std::to_string(b.frames.size()) +
                    ")");
  if (a.frames.empty()) throw DataError(std::string(what) + ": empty sequence");
}

}  // namespace

void PoseFrame::validate() const {
  check_unit(root_quat, "PoseFrame root");
  for (const auto& [name, q] : joint_quats) check_unit(q, name.c_str());
  if (!root_pos.allFinite() || !lin_vel.allFinite() || !ang_vel.allFinite() ||
      !joint_vel.allFinite())
    throw DataError("PoseFrame: non-finite entry");
}

double quat_rel_angle(const Eigen::Quaterniond& q, const Eigen::Quaterniond& q_hat) {
  check_unit(q, "quat_rel_angle");
  check_unit(q_hat, "quat_rel_angle");
  // |<q, q_hat>| = |cos(theta/2)| of the relative rotation; the abs folds the
  // double cover.
  const double dot = std::min(1.0, std::abs(q.dot(q_hat)));
  return 2.0 * std::acos(dot);
}

double reward_pose(const PoseFrame& frame, const PoseFrame& gt) {
  check_same_keys(frame.joint_quats, gt.joint_quats, "reward_pose");
  double sum = 0.0;
  auto it = frame.joint_quats.begin();
  auto jt = gt.joint_quats.begin();
  for (; it != frame.joint_quats.end(); ++it, ++jt) {
    const double a = quat_rel_angle(it->second, jt->second);
    sum += a * a;
  }
  return std::exp(-2.0 * sum);
}

double reward_end_effector(const PoseFrame& frame, const PoseFrame& gt) {
  for (const auto& name : end_effector_names()) {
    if (!frame.end_effectors.count(name) || !gt.end_effectors.count(name))
      throw DataError("reward_end_effector: missing end-effector '" + name + "'");
  }
  double sum = 0.0;
  for (const auto& name : end_effector_names())
    sum += (frame.end_effectors.at(name) - gt.end_effectors.at(name)).squaredNorm();
  return std::exp(-20.0 * sum);
}

double reward_root_pose(const PoseFrame& frame, const PoseFrame& gt) {
  const double dh = frame.root_height() - gt.root_height();
  const double angle = quat_rel_angle(frame.root_quat, gt.root_quat);
  return std::exp(-300.0 * (dh * dh + angle * angle));
}

double reward_root_velocity(const PoseFrame& frame, const PoseFrame& gt) {
  const double dl = (frame.lin_vel - gt.lin_vel).squaredNorm();
  const double dw = (frame.ang_vel - gt.ang_vel).squaredNorm();
  return std::exp(-dl - 0.1 * dw);
}

double total_reward(const PoseFrame& frame, const PoseFrame& gt, const RewardWeights& w) {
  w.validate();
  return w.w_q * reward_pose(frame, gt) + w.w_e * reward_end_effector(frame, gt) +
         w.w_p * reward_root_pose(frame, gt) + w.w_v * reward_root_velocity(frame, gt);
}

double mpjpe_mm(const PoseSequence& seq, const PoseSequence& gt) {
  check_lengths(seq, gt, "mpjpe");
  double sum = 0.0;
  size_t count = 0;
  for (size_t t = 0; t < seq.frames.size(); ++t) {
    const PoseFrame& f = seq.frames[t];
    const PoseFrame& g = gt.frames[t];
    check_same_keys(f.joint_pos, g.joint_pos, "mpjpe");
    auto it = f.joint_pos.begin();
    auto jt = g.joint_pos.begin();
    for (; it != f.joint_pos.end(); ++it, ++jt) {
      sum += ((it->second - f.root_pos) - (jt->second - g.root_pos)).norm();
      ++count;
    }
  }
  if (count == 0) throw DataError("mpjpe: no joints");
  return sum / double(count) * 1000.0;
}

namespace {

std::map<std::string, Eigen::Vector2d> normalize_keypoints(
    const std::map<std::string, Eigen::Vector2d>& kp) {
  auto hip = kp.find("hip");
  auto shoulder = kp.find("shoulder");
  if (hip == kp.end() || shoulder == kp.end())
    throw DataError("keypoint_error_2d: frames need 'hip' and 'shoulder' keypoints");
  const double extent = std::abs(shoulder->second.y() - hip->second.y());
  if (extent == 0.0) throw DataError("keypoint_error_2d: degenerate pose (zero shoulder-hip height)");
  const double scale = 0.5 / extent;
  std::map<std::string, Eigen::Vector2d> out;
  for (const auto& [name, p] : kp) out.emplace(name, (p - hip->second) * scale);
  return out;
}

}  // namespace

double keypoint_error_2d(const Keypoints2D& kp, const Keypoints2D& gt) {
  if (kp.frames.size() != gt.frames.size())
    throw DataError("keypoint_error_2d: sequence lengths differ (" +
                    std::to_string(kp.frames.size()) + " vs " + std::to_string(gt.frames.size()) +
                    ")");
  if (kp.frames.empty()) throw DataError("keypoint_error_2d: empty sequence");

  double sum = 0.0;
  size_t count = 0;
  for (size_t t = 0; t < kp.frames.size(); ++t) {
    const auto a = normalize_keypoints(kp.frames[t]);
    const auto b = normalize_keypoints(gt.frames[t]);
    check_same_keys(a, b, "keypoint_error_2d");
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end(); ++ia, ++ib) {
      sum += (ia->second - ib->second).norm();
      ++count;
    }
  }
  return sum / double(count);
}

double velocity_error(const PoseSequence& seq, const PoseSequence& gt) {
  check_lengths(seq, gt, "velocity_error");
  double sum = 0.0;
  for (size_t t = 0; t < seq.frames.size(); ++t) {
    const PoseFrame& f = seq.frames[t];
    const PoseFrame& g = gt.frames[t];
    if (f.joint_vel.size() != g.joint_vel.size())
      throw DataError("velocity_error: DoF count mismatch at frame " + std::to_string(t));
    double sq = (f.lin_vel - g.lin_vel).squaredNorm() + (f.ang_vel - g.ang_vel).squaredNorm() +
                (f.joint_vel - g.joint_vel).squaredNorm();
    sum += std::sqrt(sq);
  }
  return sum / double(seq.frames.size());
}

double avg_acceleration(const PoseSequence& seq) {
  if (seq.frames.empty()) throw DataError("avg_acceleration: empty sequence");
  const Eigen::Index dofs = seq.frames.front().joint_vel.size();
  if (dofs == 0) throw DataError("avg_acceleration: frames have no joint velocities");
  for (const auto& f : seq.frames)
    if (f.joint_vel.size() != dofs) throw DataError("avg_acceleration: DoF count mismatch");
  if (seq.frames.size() < 2) return 0.0;

  const double rate = seq.rate_hz;
  const size_t T = seq.frames.size();
  double sum = 0.0;
  for (size_t t = 0; t < T; ++t) {
    // forward difference; the last frame reuses the preceding difference
    const size_t lo = t + 1 < T ? t : T - 2;
    const Eigen::VectorXd accel = (seq.frames[lo + 1].joint_vel - seq.frames[lo].joint_vel) * rate;
    sum += accel.lpNorm<1>();
  }
  return sum / (double(T) * double(dofs));
}

double ppo_clip_loss(double ratio, double advantage, double epsilon) {
  PpoConfig{epsilon, 0.95}.validate();
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

}  // namespace nlos
