#include "mctrack/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>

namespace mctrack {

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::TD: return "TD";
    case Outcome::FD: return "FD";
    case Outcome::MD: return "MD";
    case Outcome::TN: return "TN";
  }
  return "?";
}

double overlap_area(const Box& a, const Box& b) {
  const double w = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double h = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  return w > 0 && h > 0 ? w * h : 0.0;
}

double centroid_distance(const Box& a, const Box& b) {
  return std::hypot((a.x + a.w / 2.0) - (b.x + b.w / 2.0), (a.y + a.h / 2.0) - (b.y + b.h / 2.0));
}

std::vector<FrameJudgement> judge_frame(int frame_index, const std::vector<Box>& detections,
                                        const std::vector<Box>& truth) {
  if (detections.empty() && truth.empty()) return {{frame_index, Outcome::TN, std::nullopt}};

  struct Candidate {
    double area;
    std::size_t t;
    std::size_t d;
  };
  std::vector<Candidate> candidates;
  for (std::size_t t = 0; t < truth.size(); ++t)
    for (std::size_t d = 0; d < detections.size(); ++d)
      if (const double a = overlap_area(truth[t], detections[d]); a > 0) candidates.push_back({a, t, d});
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.area > b.area; });

  std::vector<int> truth_match(truth.size(), -1);
  std::vector<bool> detection_used(detections.size(), false);
  for (const auto& c : candidates) {
    if (truth_match[c.t] >= 0 || detection_used[c.d]) continue;
    truth_match[c.t] = static_cast<int>(c.d);
    detection_used[c.d] = true;
  }

  std::vector<FrameJudgement> out;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (truth_match[t] >= 0) {
      out.push_back({frame_index, Outcome::TD,
                     centroid_distance(truth[t], detections[static_cast<std::size_t>(truth_match[t])])});
    } else {
      out.push_back({frame_index, Outcome::MD, std::nullopt});
    }
  }
  for (std::size_t d = 0; d < detections.size(); ++d)
    if (!detection_used[d]) out.push_back({frame_index, Outcome::FD, std::nullopt});
  return out;
}

std::vector<FrameJudgement> judge_sequence(const std::vector<DetectionRecord>& detections,
                                           const std::vector<std::vector<GroundTruthBox>>& truth,
                                           int frame_count) {
  std::map<int, std::vector<Box>> det_by_frame;
  std::map<int, std::vector<Box>> truth_by_frame;
  for (const auto& d : detections) det_by_frame[d.frame].push_back(d.box);
  for (const auto& object : truth)
    for (const auto& g : object)
      if (g.present) truth_by_frame[g.frame_index].push_back(g.box());

  std::vector<FrameJudgement> out;
  for (int f = 1; f <= frame_count; ++f) {
    auto frame = judge_frame(f, det_by_frame[f], truth_by_frame[f]);
    out.insert(out.end(), frame.begin(), frame.end());
  }
  return out;
}

EvalReport aggregate(const std::vector<FrameJudgement>& judgements, FrameRule rule) {
  if (judgements.empty()) throw EmptyEvaluationError("no judged frames");

  struct FrameTally {
    int td = 0;
    int md = 0;
    int fd = 0;
    std::optional<double> best_error;
  };
  std::map<int, FrameTally> frames;
  for (const auto& j : judgements) {
    FrameTally& f = frames[j.frame_index];
    switch (j.outcome) {
      case Outcome::TD:
        ++f.td;
        if (j.centroid_error && (!f.best_error || *j.centroid_error < *f.best_error))
          f.best_error = j.centroid_error;
        break;
      case Outcome::MD: ++f.md; break;
      case Outcome::FD: ++f.fd; break;
      case Outcome::TN: break;
    }
  }

  EvalReport r;
  r.frames = static_cast<int>(frames.size());
  int truth_frames = 0;
  std::vector<double> errors;
  for (const auto& [index, f] : frames) {
    if (f.fd > 0) ++r.n_fd;
    if (f.td + f.md == 0) continue;
    ++truth_frames;
    const bool detected = rule == FrameRule::AllMatched ? f.md == 0 : f.td > 0;
    ++(detected ? r.n_td : r.n_md);
    if (f.best_error) errors.push_back(*f.best_error);
  }
  auto pct = [](int num, int den) { return den > 0 ? 100.0 * num / den : 0.0; };
  r.td_pct = pct(r.n_td, r.frames);
  r.fd_pct = pct(r.n_fd, r.n_td + r.n_fd);
  r.md_pct = pct(r.n_md, r.n_td + r.n_md);

  std::sort(errors.begin(), errors.end());
  for (int t = 0; t <= kMaxPrecisionThreshold; ++t) {
    const auto within = std::upper_bound(errors.begin(), errors.end(), static_cast<double>(t)) - errors.begin();
    r.precision.push_back({t, truth_frames > 0 ? static_cast<double>(within) / truth_frames : 0.0});
  }
  return r;
}

double measure_fps(long frame_count, double elapsed_seconds) {
  if (frame_count == 0) return 0.0;
  if (!(elapsed_seconds > 0.0)) throw MeasurementError("elapsed time must be positive");
  return static_cast<double>(frame_count) / elapsed_seconds;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["frames"] = report.frames;
  j["n_td"] = report.n_td;
  j["n_fd"] = report.n_fd;
  j["n_md"] = report.n_md;
  j["td_pct"] = report.td_pct;
  j["fd_pct"] = report.fd_pct;
  j["md_pct"] = report.md_pct;
  j["fps"] = report.fps;
  auto& curve = j["precision"] = nlohmann::json::array();
  for (const auto& p : report.precision) curve.push_back({{"threshold", p.threshold}, {"fraction", p.fraction}});
  return j.dump(2);
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << report_to_json(report) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void write_precision_csv(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "threshold,fraction\n";
  for (const auto& p : report.precision) out << p.threshold << ',' << p.fraction << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace mctrack
