#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <vector>

#include "mctrack/background_model.hpp"
#include "mctrack/errors.hpp"
#include "mctrack/evaluation.hpp"
#include "mctrack/foreground.hpp"
#include "mctrack/motion_compensation.hpp"
#include "mctrack/pipeline.hpp"
#include "mctrack/synthetic.hpp"

namespace py = pybind11;
using namespace mctrack;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const DoubleArray& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
  const int h = static_cast<int>(a.shape(0));
  const int w = static_cast<int>(a.shape(1));
  std::vector<double> data(a.data(), a.data() + a.size());
  return GrayImage(w, h, std::move(data));
}

template <typename T>
py::array_t<T> to_array(const Image<T>& img) {
  py::array_t<T> out({img.height(), img.width()});
  if (img.size() > 0) std::memcpy(out.mutable_data(), img.data().data(), img.size() * sizeof(T));
  return out;
}

std::vector<Frame> to_frames(const DoubleArray& stack) {
  if (stack.ndim() != 3) throw DimensionError("expected a (frames, height, width) array");
  const auto t = stack.shape(0), h = stack.shape(1), w = stack.shape(2);
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(t));
  for (py::ssize_t i = 0; i < t; ++i) {
    const double* p = stack.data(i, 0, 0);
    frames.push_back({static_cast<int>(i) + 1,
                      GrayImage(static_cast<int>(w), static_cast<int>(h),
                                std::vector<double>(p, p + h * w))});
  }
  return frames;
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["frames"] = r.frames;
  d["n_td"] = r.n_td;
  d["n_fd"] = r.n_fd;
  d["n_md"] = r.n_md;
  d["td_pct"] = r.td_pct;
  d["fd_pct"] = r.fd_pct;
  d["md_pct"] = r.md_pct;
  std::vector<double> precision;
  for (const auto& p : r.precision) precision.push_back(p.fraction);
  d["precision"] = precision;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Moving-camera object detection and tracking";

  py::register_exception<Error>(m, "MctrackError", PyExc_RuntimeError);

  m.def(
      "estimate_shift",
      [](const DoubleArray& reference, const DoubleArray& moved) {
        const ShiftEstimate e =
            phase_correlate(forward_transform(to_image(reference)), forward_transform(to_image(moved)));
        return py::make_tuple(e.dx, e.dy, e.peak_value);
      },
      py::arg("reference"), py::arg("moved"),
      "Integer (dx, dy, peak) such that `moved` is `reference` circularly shifted by (dx, dy).");

  m.def(
      "compensate",
      [](const DoubleArray& moved, int dx, int dy) {
        return to_array(compensate(forward_transform(to_image(moved)), {dx, dy, 1.0}));
      },
      py::arg("moved"), py::arg("dx"), py::arg("dy"));

  m.def("quantize", [](const DoubleArray& image) { return to_array(quantize(to_image(image))); });

  m.def(
      "build_background",
      [](const std::vector<DoubleArray>& history) {
        HistoryWindow w;
        for (const auto& a : history) {
          w.frames.push_back(to_image(a));
          w.quantized.push_back(quantize(w.frames.back()));
          w.shifts.push_back({});
        }
        const ActingBackground bg = build_background(w);
        return py::make_tuple(to_array(bg.background), to_array(bg.dissimilarity), to_array(bg.weight));
      },
      py::arg("history"), "Aligned history, most recent first. Returns (background, dissimilarity, weight).");

  m.def(
      "foreground_mask",
      [](const DoubleArray& current, const std::vector<DoubleArray>& history) {
        HistoryWindow w;
        for (const auto& a : history) {
          w.frames.push_back(to_image(a));
          w.quantized.push_back(quantize(w.frames.back()));
          w.shifts.push_back({});
        }
        const ActingBackground bg = build_background(w);
        const GrayImage diff = difference_foreground(to_image(current), bg);
        return to_array(classify_moving(diff, bg.weight, bg.dissimilarity, LevelBands::for_eta(bg.eta)));
      },
      py::arg("current"), py::arg("history"));

  m.def(
      "track",
      [](const DoubleArray& frames, int eta, double alpha, int min_blob_area) {
        PipelineConfig cfg;
        cfg.eta = eta;
        cfg.alpha = alpha;
        cfg.min_blob_area = min_blob_area;
        cfg.validate();
        const PipelineRun run = run_pipeline(to_frames(frames), cfg);
        py::list out;
        for (const auto& d : run.detections)
          out.append(py::make_tuple(d.frame, d.id, d.box.x, d.box.y, d.box.w, d.box.h));
        return out;
      },
      py::arg("frames"), py::arg("eta") = 4, py::arg("alpha") = 1.5, py::arg("min_blob_area") = 9,
      "Runs detection and tracking; returns (frame, id, x, y, w, h) rows with 1-based boxes.");

  m.def(
      "render_scene",
      [](const std::string& json_text) {
        const SyntheticSequence seq = render(scene_from_json(json_text));
        const int t = static_cast<int>(seq.frames.size());
        const int h = t ? seq.frames[0].height() : 0;
        const int w = t ? seq.frames[0].width() : 0;
        py::array_t<double> stack({t, h, w});
        for (int i = 0; i < t; ++i)
          std::memcpy(stack.mutable_data(i, 0, 0), seq.frames[static_cast<std::size_t>(i)].pixels.data().data(),
                      static_cast<std::size_t>(h * w) * sizeof(double));
        py::list truth;
        for (const auto& object : seq.truth) {
          py::list rows;
          for (const auto& g : object)
            rows.append(g.present ? py::object(py::make_tuple(g.x, g.y, g.w, g.h)) : py::object(py::none()));
          truth.append(rows);
        }
        return py::make_tuple(stack, truth);
      },
      py::arg("scene_json"), "Returns (frames, truth); truth[k][t] is a 1-based box or None.");

  m.def(
      "evaluate",
      [](const std::vector<std::tuple<int, int, int, int, int, int>>& detections,
         const std::vector<std::vector<std::optional<std::tuple<int, int, int, int>>>>& truth, int frame_count) {
        std::vector<DetectionRecord> dets;
        for (const auto& [f, id, x, y, w, h] : detections) dets.push_back({f, id, {x, y, w, h}});
        std::vector<std::vector<GroundTruthBox>> gt;
        for (const auto& object : truth) {
          auto& rows = gt.emplace_back();
          for (std::size_t t = 0; t < object.size(); ++t) {
            GroundTruthBox g;
            g.frame_index = static_cast<int>(t) + 1;
            if (object[t]) std::tie(g.x, g.y, g.w, g.h) = *object[t];
            g.present = object[t].has_value();
            rows.push_back(g);
          }
        }
        return report_dict(aggregate(judge_sequence(dets, gt, frame_count)));
      },
      py::arg("detections"), py::arg("truth"), py::arg("frame_count"));
}
