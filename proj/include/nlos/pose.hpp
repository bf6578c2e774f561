#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <map>
#include <string>
#include <vector>

#include "nlos/errors.hpp"

namespace nlos {

// End-effector set used by the imitation reward.
inline const std::vector<std::string>& end_effector_names() {
  static const std::vector<std::string> names = {"head", "left_hand", "right_hand", "left_foot",
                                                 "right_foot"};
  return names;
}

// One pose sample: root transform, per-joint orientations and positions,
// root-relative end-effector vectors, and velocities.
struct PoseFrame {
  Eigen::Vector3d root_pos = Eigen::Vector3d::Zero();
  Eigen::Quaterniond root_quat = Eigen::Quaterniond::Identity();
  std::map<std::string, Eigen::Quaterniond> joint_quats;  // non-root joints
  std::map<std::string, Eigen::Vector3d> joint_pos;       // root included
  std::map<std::string, Eigen::Vector3d> end_effectors;   // root-relative
  Eigen::Vector3d lin_vel = Eigen::Vector3d::Zero();
  Eigen::Vector3d ang_vel = Eigen::Vector3d::Zero();
  Eigen::VectorXd joint_vel;  // actuated DoF velocities

  double root_height() const { return root_pos.z(); }
  void validate() const;
};

struct PoseSequence {
  std::vector<PoseFrame> frames;
  double rate_hz = 30.0;
};

// Named 2D keypoints per frame. Normalization puts the hip at the origin and
// scales so the vertical shoulder-hip extent is 0.5.
struct Keypoints2D {
  std::vector<std::map<std::string, Eigen::Vector2d>> frames;
};

struct RewardWeights {
  double w_q = 0.5;
  double w_e = 0.3;
  double w_p = 0.1;
  double w_v = 0.1;

  void validate() const {
    if (w_q < 0 || w_e < 0 || w_p < 0 || w_v < 0)
      throw ConfigError("reward weights must be >= 0");
  }
};

struct PpoConfig {
  double epsilon = 0.2;
  double gamma = 0.95;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("ppo: epsilon must be in (0, 1)");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("ppo: gamma must be in (0, 1]");
  }
};

// Angle of the relative rotation q * q_hat^{-1}, folded to [0, pi]; q and -q
// are the same rotation.
double quat_rel_angle(const Eigen::Quaterniond& q, const Eigen::Quaterniond& q_hat);

// r_q = exp(-2 sum_j angle_j^2) over non-root joints.
double reward_pose(const PoseFrame& frame, const PoseFrame& gt);

// r_e = exp(-20 sum_e |e - e_hat|^2) over the five end-effectors.
double reward_end_effector(const PoseFrame& frame, const PoseFrame& gt);

// r_p = exp(-300 ((h - h_hat)^2 + angle(q_r, q_r_hat)^2)).
double reward_root_pose(const PoseFrame& frame, const PoseFrame& gt);

// r_v = exp(-|l - l_hat|^2 - 0.1 |w - w_hat|^2).
double reward_root_velocity(const PoseFrame& frame, const PoseFrame& gt);

double total_reward(const PoseFrame& frame, const PoseFrame& gt, const RewardWeights& w);

// Root-relative mean per-joint position error, in millimeters.
double mpjpe_mm(const PoseSequence& seq, const PoseSequence& gt);

// Mean keypoint distance after hip/shoulder normalization of both inputs.
double keypoint_error_2d(const Keypoints2D& kp, const Keypoints2D& gt);

// Mean Euclidean distance between concatenated (lin, ang, joint) velocity
// vectors.
double velocity_error(const PoseSequence& seq, const PoseSequence& gt);

// Mean L1 magnitude of joint accelerations per actuated DoF; accelerations by
// forward differences of joint velocities at the sequence rate.
double avg_acceleration(const PoseSequence& seq);

// min(w A, clip(w, 1 - eps, 1 + eps) A).
double ppo_clip_loss(double ratio, double advantage, double epsilon);

}  // namespace nlos
