#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "mctrack/blob_refinement.hpp"

namespace mctrack {

/// Constant-velocity filter over s = (row, col, v_row, v_col).
struct KalmanState {
  Eigen::Vector4d state = Eigen::Vector4d::Zero();
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity() * 100.0;

  double row() const { return state(0); }
  double col() const { return state(1); }
};

struct KalmanParams {
  double initial_covariance = 100.0;
  double process_noise = 0.01;
  double measurement_noise = 1.0;
};

/// Row-major transition: position += velocity.
Eigen::Matrix4d transition_matrix();
/// Selects (row, col) from the state.
Eigen::Matrix<double, 2, 4> measurement_matrix();

KalmanState kalman_init(double row, double col, const KalmanParams& params = {});
void kalman_predict(KalmanState& k, const KalmanParams& params = {});
void kalman_update(KalmanState& k, double row, double col, const KalmanParams& params = {});

struct Track {
  int id = 0;
  int height = 0;
  int width = 0;
  std::array<int, 3> peaks{};
  KalmanState kalman;
  int invisible_count = 0;
  int age = 0;
  int total_visible = 0;
  bool visible = false;  // associated on the most recent frame

  /// Box centred on the filtered centroid, 0-based.
  Box box() const;
};

/// K tracks by L detections; infeasible pairs hold phi.
struct CostMatrix {
  int rows = 0;
  int cols = 0;
  double phi = 1e6;
  std::vector<double> values;

  CostMatrix() = default;
  CostMatrix(int k, int l, double phi_value)
      : rows(k), cols(l), phi(phi_value),
        values(static_cast<std::size_t>(k) * static_cast<std::size_t>(l), phi_value) {}

  double& at(int k, int l) { return values[static_cast<std::size_t>(k) * cols + l]; }
  double at(int k, int l) const { return values[static_cast<std::size_t>(k) * cols + l]; }
  bool feasible(int k, int l) const { return at(k, l) < phi; }
};

struct Association {
  std::vector<std::pair<int, int>> assignments;  // (track row, detection column)
  std::vector<int> unassigned_tracks;
  std::vector<int> new_detections;
  std::vector<int> discarded_detections;
};

struct TrackerParams {
  double alpha = 1.5;
  double phi = 1e6;
  int invisible_max = 8;  // a track is deleted once unseen for more frames than this
  KalmanParams kalman;
};

/// Mean absolute difference of the three histogram peaks.
double appearance_cost(const std::array<int, 3>& a, const std::array<int, 3>& b);

/// Appearance cost where the detection lies within alpha*height rows and
/// alpha*width columns of the track's predicted centroid; phi elsewhere.
CostMatrix build_cost_matrix(const std::vector<Track>& tracks,
                             const std::vector<DetectedObject>& detections, double alpha,
                             double phi);

/// Greedy per-track minimum in row order. Leftover detections infeasible for
/// every track start new tracks; the rest are discarded.
Association associate(const CostMatrix& costs);

void update_assigned(Track& track, const DetectedObject& detection, const KalmanParams& params = {});
void update_unassigned(Track& track);

/// Per-frame lifecycle of a set of tracks. Ids start at 1 and are never reused.
class Tracker {
 public:
  explicit Tracker(TrackerParams params = {}) : params_(params) {}

  /// Creates one track per object.
  void initialize_tracks(const std::vector<DetectedObject>& objects);

  /// Predict, associate and update with this frame's detections.
  Association step(const std::vector<DetectedObject>& detections);

  const std::vector<Track>& tracks() const noexcept { return tracks_; }
  const TrackerParams& params() const noexcept { return params_; }
  int next_id() const noexcept { return next_id_; }

 private:
  Track make_track(const DetectedObject& object);

  TrackerParams params_;
  std::vector<Track> tracks_;  // ascending id
  int next_id_ = 1;
};

}  // namespace mctrack
