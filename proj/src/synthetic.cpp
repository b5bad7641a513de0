#include "mctrack/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

namespace mctrack {
namespace {

int wrap(int v, int n) { return ((v % n) + n) % n; }

// Uniform double in [0, 1) from the top 53 bits; stable across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Offset add(Offset a, Offset b) { return {a.x + b.x, a.y + b.y}; }
Offset sub(Offset a, Offset b) { return {a.x - b.x, a.y - b.y}; }

}  // namespace

std::vector<Offset> constant_camera(int frames, Offset velocity) {
  std::vector<Offset> steps(static_cast<std::size_t>(std::max(frames, 0)), velocity);
  if (!steps.empty()) steps.front() = {0, 0};
  return steps;
}

std::vector<Offset> cumulative_offsets(const SceneSpec& spec) {
  std::vector<Offset> offsets(static_cast<std::size_t>(spec.frames));
  Offset acc;
  for (int t = 0; t < spec.frames; ++t) {
    if (static_cast<std::size_t>(t) < spec.camera_steps.size())
      acc = add(acc, spec.camera_steps[static_cast<std::size_t>(t)]);
    offsets[static_cast<std::size_t>(t)] = acc;
  }
  return offsets;
}

std::vector<Offset> linear_trajectory(const SceneSpec& spec, Offset start, Offset velocity,
                                      int width, int height, CoordinateFrame coords, bool bounce) {
  const auto offsets = cumulative_offsets(spec);
  auto to_image = [&](Offset p, int t) {
    return coords == CoordinateFrame::World ? sub(p, offsets[static_cast<std::size_t>(t)]) : p;
  };
  std::vector<Offset> out;
  out.reserve(static_cast<std::size_t>(spec.frames));
  Offset p = start;
  for (int t = 0; t < spec.frames; ++t) {
    if (t > 0) {
      Offset next = add(p, velocity);
      if (bounce) {
        const Offset img = to_image(next, t);
        if (img.x < 0 || img.x + width > spec.width) velocity.x = -velocity.x;
        if (img.y < 0 || img.y + height > spec.height) velocity.y = -velocity.y;
        next = add(p, velocity);
      }
      p = next;
    }
    out.push_back(p);
  }
  return out;
}

Offset image_position(const SceneSpec& spec, const ObjectSpec& object, int t) {
  const Offset p = object.trajectory.at(static_cast<std::size_t>(t));
  if (object.coords == CoordinateFrame::Image) return p;
  return sub(p, cumulative_offsets(spec)[static_cast<std::size_t>(t)]);
}

void validate(const SceneSpec& spec) {
  if (spec.width < 2 || spec.height < 2) throw SpecValidationError("frame size must be at least 2x2");
  if (spec.frames < 1) throw SpecValidationError("scene needs at least one frame");
  if (spec.background.high < spec.background.low)
    throw SpecValidationError("background range is inverted");
  const auto offsets = cumulative_offsets(spec);
  for (std::size_t k = 0; k < spec.objects.size(); ++k) {
    const ObjectSpec& o = spec.objects[k];
    if (o.width <= 0 || o.height <= 0) throw SpecValidationError("object size must be positive");
    if (o.trajectory.size() < static_cast<std::size_t>(spec.frames))
      throw SpecValidationError("object " + std::to_string(k + 1) + " trajectory is shorter than the scene");
    for (int t = 0; t < spec.frames; ++t) {
      Offset p = o.trajectory[static_cast<std::size_t>(t)];
      if (o.coords == CoordinateFrame::World) p = sub(p, offsets[static_cast<std::size_t>(t)]);
      if (p.x < 0 || p.y < 0 || p.x + o.width > spec.width || p.y + o.height > spec.height)
        throw SpecValidationError("object " + std::to_string(k + 1) + " leaves the frame at frame " +
                                  std::to_string(t + 1));
    }
  }
  for (const auto& f : spec.flicker)
    if (f.region.w <= 0 || f.region.h <= 0 || f.amplitude < 0)
      throw SpecValidationError("invalid flicker region");
  for (const auto& o : spec.occluders)
    if (o.rect.w <= 0 || o.rect.h <= 0) throw SpecValidationError("invalid occluder");
}

GrayImage render_background(const SceneSpec& spec) {
  const int w = spec.width;
  const int h = spec.height;
  const BackgroundSpec& b = spec.background;
  GrayImage out(w, h);
  if (b.kind == BackgroundSpec::Kind::Checker) {
    const int s = std::max(b.checker_size, 1);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.at(x, y) = ((x / s + y / s) % 2) ? b.high : b.low;
    return out;
  }
  std::mt19937_64 rng(b.seed);
  GrayImage noise(w, h);
  for (auto& v : noise.pixels()) v = b.low + (b.high - b.low) * unit(rng);
  // 3x3 box filter with circular boundary keeps the texture periodic.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) sum += noise.at(wrap(x + dx, w), wrap(y + dy, h));
      out.at(x, y) = std::round(sum / 9.0);
    }
  }
  return out;
}

Mask world_region_mask(const SceneSpec& spec, const Box& region, int t) {
  const Offset off = cumulative_offsets(spec)[static_cast<std::size_t>(t)];
  Mask mask(spec.width, spec.height, 0);
  for (int wy = region.y; wy < region.y + region.h; ++wy)
    for (int wx = region.x; wx < region.x + region.w; ++wx)
      mask.at(wrap(wx - off.x, spec.width), wrap(wy - off.y, spec.height)) = 1;
  return mask;
}

SyntheticSequence render(const SceneSpec& spec) {
  validate(spec);
  const int w = spec.width;
  const int h = spec.height;
  const GrayImage background = render_background(spec);

  SyntheticSequence seq;
  seq.camera_offsets = cumulative_offsets(spec);
  seq.truth.resize(spec.objects.size());
  std::vector<std::mt19937_64> flicker_rngs;
  for (const auto& f : spec.flicker) flicker_rngs.emplace_back(f.seed);

  for (int t = 0; t < spec.frames; ++t) {
    const Offset off = seq.camera_offsets[static_cast<std::size_t>(t)];
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) img.at(x, y) = background.at(wrap(x + off.x, w), wrap(y + off.y, h));

    for (std::size_t k = 0; k < spec.flicker.size(); ++k) {
      const FlickerSpec& f = spec.flicker[k];
      for (int wy = f.region.y; wy < f.region.y + f.region.h; ++wy) {
        for (int wx = f.region.x; wx < f.region.x + f.region.w; ++wx) {
          const double noise = f.amplitude * (2.0 * unit(flicker_rngs[k]) - 1.0);
          double& px = img.at(wrap(wx - off.x, w), wrap(wy - off.y, h));
          px = std::clamp(std::round(px + noise), 0.0, 255.0);
        }
      }
    }

    // Object labels let the truth reflect what remains visible after occlusion.
    Image<int> owner(w, h, -1);
    for (std::size_t k = 0; k < spec.objects.size(); ++k) {
      const ObjectSpec& o = spec.objects[k];
      const Offset p = image_position(spec, o, t);
      for (int y = p.y; y < p.y + o.height; ++y)
        for (int x = p.x; x < p.x + o.width; ++x) {
          img.at(x, y) = o.intensity;
          owner.at(x, y) = static_cast<int>(k);
        }
    }
    for (const auto& occ : spec.occluders) {
      for (int wy = occ.rect.y; wy < occ.rect.y + occ.rect.h; ++wy)
        for (int wx = occ.rect.x; wx < occ.rect.x + occ.rect.w; ++wx) {
          const int x = wrap(wx - off.x, w);
          const int y = wrap(wy - off.y, h);
          img.at(x, y) = occ.intensity;
          owner.at(x, y) = -1;
        }
    }

    for (std::size_t k = 0; k < spec.objects.size(); ++k) {
      int x0 = w, y0 = h, x1 = -1, y1 = -1;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (owner.at(x, y) == static_cast<int>(k)) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
          }
      GroundTruthBox g{t + 1, 0, 0, 0, 0, false};
      if (x1 >= 0) g = {t + 1, x0 + 1, y0 + 1, x1 - x0 + 1, y1 - y0 + 1, true};
      seq.truth[k].push_back(g);
    }
    seq.frames.push_back({t + 1, std::move(img)});
  }
  return seq;
}

namespace {

Offset parse_offset(const nlohmann::json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }
Box parse_box(const nlohmann::json& j) {
  return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>(), j.at(3).get<int>()};
}

}  // namespace

SceneSpec scene_from_json(const std::string& text) {
  SceneSpec spec;
  try {
    const auto j = nlohmann::json::parse(text);
    spec.width = j.value("width", spec.width);
    spec.height = j.value("height", spec.height);
    spec.frames = j.value("frames", spec.frames);
    if (j.contains("background")) {
      const auto& b = j["background"];
      const std::string kind = b.value("kind", std::string("noise"));
      if (kind == "checker")
        spec.background.kind = BackgroundSpec::Kind::Checker;
      else if (kind != "noise")
        throw SpecValidationError("unknown background kind '" + kind + "'");
      spec.background.seed = b.value("seed", spec.background.seed);
      spec.background.low = b.value("low", spec.background.low);
      spec.background.high = b.value("high", spec.background.high);
      spec.background.checker_size = b.value("size", spec.background.checker_size);
    }
    spec.camera_steps = constant_camera(spec.frames, {0, 0});
    if (j.contains("camera")) {
      const auto& c = j["camera"];
      if (c.contains("steps")) {
        spec.camera_steps.clear();
        for (const auto& s : c["steps"]) spec.camera_steps.push_back(parse_offset(s));
      } else if (c.contains("velocity")) {
        spec.camera_steps = constant_camera(spec.frames, parse_offset(c["velocity"]));
      }
    }
    for (const auto& o : j.value("objects", nlohmann::json::array())) {
      ObjectSpec obj;
      obj.width = o.value("width", obj.width);
      obj.height = o.value("height", obj.height);
      obj.intensity = o.value("intensity", obj.intensity);
      const std::string coords = o.value("coords", std::string("world"));
      if (coords == "image")
        obj.coords = CoordinateFrame::Image;
      else if (coords != "world")
        throw SpecValidationError("unknown coordinate frame '" + coords + "'");
      if (o.contains("trajectory")) {
        for (const auto& p : o["trajectory"]) obj.trajectory.push_back(parse_offset(p));
      } else {
        obj.trajectory = linear_trajectory(spec, parse_offset(o.at("start")),
                                           o.contains("velocity") ? parse_offset(o["velocity"]) : Offset{},
                                           obj.width, obj.height, obj.coords, o.value("bounce", false));
      }
      spec.objects.push_back(std::move(obj));
    }
    for (const auto& o : j.value("occluders", nlohmann::json::array()))
      spec.occluders.push_back({parse_box(o.at("rect")), o.value("intensity", 90.0)});
    for (const auto& f : j.value("flicker", nlohmann::json::array()))
      spec.flicker.push_back({parse_box(f.at("region")), f.value("amplitude", 0.0),
                              f.value("seed", std::uint64_t{7})});
  } catch (const nlohmann::json::exception& e) {
    throw SpecValidationError(std::string("scene JSON: ") + e.what());
  }
  validate(spec);
  return spec;
}

SceneSpec load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return scene_from_json(ss.str());
}

void write_sequence(const std::filesystem::path& dir, const SyntheticSequence& sequence) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const Frame& f : sequence.frames) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04d.pgm", f.index);
    write_pgm(dir / name, f.pixels);
  }
  for (std::size_t k = 0; k < sequence.truth.size(); ++k)
    write_ground_truth(dir / ("gt_object" + std::to_string(k + 1) + ".txt"), sequence.truth[k]);
}

}  // namespace mctrack
