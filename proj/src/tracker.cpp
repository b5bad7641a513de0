#include "mctrack/tracker.hpp"

#include <cmath>
#include <limits>

namespace mctrack {

Eigen::Matrix4d transition_matrix() {
  Eigen::Matrix4d a;
  a << 1, 0, 1, 0,
       0, 1, 0, 1,
       0, 0, 1, 0,
       0, 0, 0, 1;
  return a;
}

Eigen::Matrix<double, 2, 4> measurement_matrix() {
  Eigen::Matrix<double, 2, 4> h;
  h << 1, 0, 0, 0,
       0, 1, 0, 0;
  return h;
}

KalmanState kalman_init(double row, double col, const KalmanParams& params) {
  KalmanState k;
  k.state << row, col, 0.0, 0.0;
  k.covariance = Eigen::Matrix4d::Identity() * params.initial_covariance;
  return k;
}

void kalman_predict(KalmanState& k, const KalmanParams& params) {
  const Eigen::Matrix4d a = transition_matrix();
  k.state = a * k.state;
  k.covariance = a * k.covariance * a.transpose() +
                 Eigen::Matrix4d::Identity() * params.process_noise;
}

void kalman_update(KalmanState& k, double row, double col, const KalmanParams& params) {
  const auto h = measurement_matrix();
  const Eigen::Matrix2d innovation_cov =
      h * k.covariance * h.transpose() + Eigen::Matrix2d::Identity() * params.measurement_noise;
  const Eigen::Matrix<double, 4, 2> gain =
      k.covariance * h.transpose() * innovation_cov.inverse();
  const Eigen::Vector2d measurement(row, col);
  k.state += gain * (measurement - h * k.state);
  k.covariance = (Eigen::Matrix4d::Identity() - gain * h) * k.covariance;
}

Box Track::box() const {
  const int x = static_cast<int>(std::lround(kalman.col() - (width - 1) / 2.0));
  const int y = static_cast<int>(std::lround(kalman.row() - (height - 1) / 2.0));
  return {x, y, width, height};
}

double appearance_cost(const std::array<int, 3>& a, const std::array<int, 3>& b) {
  double sum = 0.0;
  for (std::size_t n = 0; n < 3; ++n) sum += std::abs(a[n] - b[n]);
  return sum / 3.0;
}

CostMatrix build_cost_matrix(const std::vector<Track>& tracks,
                             const std::vector<DetectedObject>& detections, double alpha,
                             double phi) {
  CostMatrix costs(static_cast<int>(tracks.size()), static_cast<int>(detections.size()), phi);
  for (int k = 0; k < costs.rows; ++k) {
    const Track& t = tracks[static_cast<std::size_t>(k)];
    for (int l = 0; l < costs.cols; ++l) {
      const DetectedObject& d = detections[static_cast<std::size_t>(l)];
      const bool gated = std::abs(t.kalman.row() - d.row) <= alpha * t.height &&
                         std::abs(t.kalman.col() - d.col) <= alpha * t.width;
      if (gated) costs.at(k, l) = appearance_cost(t.peaks, d.peaks);
    }
  }
  return costs;
}

Association associate(const CostMatrix& costs) {
  Association result;
  std::vector<bool> taken(static_cast<std::size_t>(costs.cols), false);
  for (int k = 0; k < costs.rows; ++k) {
    int best = -1;
    for (int l = 0; l < costs.cols; ++l) {
      if (taken[static_cast<std::size_t>(l)] || !costs.feasible(k, l)) continue;
      if (best < 0 || costs.at(k, l) < costs.at(k, best)) best = l;
    }
    if (best < 0) {
      result.unassigned_tracks.push_back(k);
    } else {
      taken[static_cast<std::size_t>(best)] = true;
      result.assignments.emplace_back(k, best);
    }
  }
  for (int l = 0; l < costs.cols; ++l) {
    if (taken[static_cast<std::size_t>(l)]) continue;
    bool any_feasible = false;
    for (int k = 0; k < costs.rows && !any_feasible; ++k) any_feasible = costs.feasible(k, l);
    (any_feasible ? result.discarded_detections : result.new_detections).push_back(l);
  }
  return result;
}

void update_assigned(Track& track, const DetectedObject& detection, const KalmanParams& params) {
  kalman_update(track.kalman, detection.row, detection.col, params);
  track.height = detection.height;
  track.width = detection.width;
  track.peaks = detection.peaks;
  track.invisible_count = 0;
  track.visible = true;
  ++track.total_visible;
}

void update_unassigned(Track& track) {
  // The predicted state stands in as the estimate.
  ++track.invisible_count;
  track.visible = false;
}

Track Tracker::make_track(const DetectedObject& object) {
  Track t;
  t.id = next_id_++;
  t.height = object.height;
  t.width = object.width;
  t.peaks = object.peaks;
  t.kalman = kalman_init(object.row, object.col, params_.kalman);
  t.age = 1;
  t.total_visible = 1;
  t.visible = true;
  return t;
}

void Tracker::initialize_tracks(const std::vector<DetectedObject>& objects) {
  for (const auto& object : objects) tracks_.push_back(make_track(object));
}

Association Tracker::step(const std::vector<DetectedObject>& detections) {
  if (tracks_.empty()) {
    initialize_tracks(detections);
    Association a;
    for (int l = 0; l < static_cast<int>(detections.size()); ++l) a.new_detections.push_back(l);
    return a;
  }

  for (Track& t : tracks_) {
    kalman_predict(t.kalman, params_.kalman);
    ++t.age;
  }
  const CostMatrix costs = build_cost_matrix(tracks_, detections, params_.alpha, params_.phi);
  Association a = associate(costs);
  for (const auto& [k, l] : a.assignments)
    update_assigned(tracks_[static_cast<std::size_t>(k)], detections[static_cast<std::size_t>(l)],
                    params_.kalman);
  for (int k : a.unassigned_tracks) update_unassigned(tracks_[static_cast<std::size_t>(k)]);

  std::erase_if(tracks_, [&](const Track& t) { return t.invisible_count > params_.invisible_max; });
  for (int l : a.new_detections) tracks_.push_back(make_track(detections[static_cast<std::size_t>(l)]));
  return a;
}

}  // namespace mctrack
