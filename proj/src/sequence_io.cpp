#include "mctrack/sequence_io.hpp"

#include <fnmatch.h>
#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace mctrack {
namespace fs = std::filesystem;

double luminance(double r, double g, double b) {
  return std::floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5);
}

namespace {

double clamp_intensity(double v) { return std::clamp(v, 0.0, 255.0); }

// Reads the next whitespace-separated header token, skipping '#' comments.
std::string pnm_token(std::istream& in, const fs::path& path) {
  std::string token;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
      if (!token.empty()) break;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(c);
  }
  if (token.empty()) throw FormatError("truncated PNM header: " + path.string());
  return token;
}

int pnm_int(std::istream& in, const fs::path& path) {
  const std::string t = pnm_token(in, path);
  try {
    std::size_t used = 0;
    const int v = std::stoi(t, &used);
    if (used != t.size()) throw FormatError("bad PNM header value: " + path.string());
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("bad PNM header value '" + t + "' in " + path.string());
  }
}

GrayImage read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pnm_token(in, path);
  const bool ascii = magic == "P2" || magic == "P3";
  const bool color = magic == "P3" || magic == "P6";
  if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6")
    throw FormatError("unsupported PNM variant " + magic + ": " + path.string());

  const int width = pnm_int(in, path);
  const int height = pnm_int(in, path);
  const int maxval = pnm_int(in, path);
  if (width <= 0 || height <= 0) throw FormatError("empty image: " + path.string());
  if (maxval <= 0 || maxval > 255)
    throw FormatError("only 8-bit PNM is supported: " + path.string());

  const int channels = color ? 3 : 1;
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  std::vector<double> samples(count);
  if (ascii) {
    for (auto& s : samples) {
      int v;
      if (!(in >> v)) throw FormatError("truncated PNM data: " + path.string());
      s = v;
    }
  } else {
    std::vector<unsigned char> raw(count);
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count)))
      throw FormatError("truncated PNM data: " + path.string());
    std::copy(raw.begin(), raw.end(), samples.begin());
  }
  const double scale = 255.0 / maxval;

  GrayImage image(width, height);
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (color) {
      image[i] = luminance(samples[3 * i] * scale, samples[3 * i + 1] * scale,
                           samples[3 * i + 2] * scale);
    } else {
      image[i] = samples[i] * scale;
    }
    image[i] = clamp_intensity(image[i]);
  }
  return image;
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

GrayImage read_png(const fs::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng initialisation failed");
  }
  std::vector<png_byte> buffer;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("corrupt PNG: " + path.string());
  }
  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (depth > 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("16-bit PNG is not supported: " + path.string());
  }
  png_set_expand(png);  // palette and sub-byte gray to 8-bit
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const int channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  buffer.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = buffer.data() + y * stride;
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);

  GrayImage image(static_cast<int>(width), static_cast<int>(height));
  for (png_uint_32 y = 0; y < height; ++y) {
    const png_byte* row = rows[y];
    for (png_uint_32 x = 0; x < width; ++x) {
      const png_byte* px = row + static_cast<std::size_t>(x) * channels;
      const double v = channels >= 3 ? luminance(px[0], px[1], px[2]) : px[0];
      image.at(static_cast<int>(x), static_cast<int>(y)) = clamp_intensity(v);
    }
  }
  return image;
}

std::vector<unsigned char> to_bytes(const GrayImage& image) {
  std::vector<unsigned char> bytes(image.size());
  for (std::size_t i = 0; i < image.size(); ++i)
    bytes[i] = static_cast<unsigned char>(std::floor(clamp_intensity(image[i]) + 0.5));
  return bytes;
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

GrayImage read_image(const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_pnm(path);
  throw FormatError("unsupported image format: " + path.string());
}

void write_pgm(const fs::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  const auto bytes = to_bytes(image);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_png(const fs::path& path, const GrayImage& image) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng initialisation failed");
  }
  auto bytes = to_bytes(image);
  std::vector<png_bytep> rows(static_cast<std::size_t>(image.height()));
  for (int y = 0; y < image.height(); ++y)
    rows[static_cast<std::size_t>(y)] = bytes.data() + static_cast<std::size_t>(y) * image.width();
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::vector<Frame> load_sequence(const fs::path& dir, const std::string& pattern) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (::fnmatch(pattern.c_str(), name.c_str(), 0) == 0) files.push_back(entry.path());
  }
  if (files.empty())
    throw EmptySequenceError("no files matching '" + pattern + "' in " + dir.string());
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  std::vector<Frame> frames;
  frames.reserve(files.size());
  for (const auto& file : files) {
    GrayImage image = read_image(file);
    if (!frames.empty() && !image.same_shape(frames.front().pixels)) {
      throw FormatError("resolution of " + file.string() + " (" + std::to_string(image.width()) +
                        "x" + std::to_string(image.height()) + ") differs from the first frame");
    }
    frames.push_back({static_cast<int>(frames.size()) + 1, std::move(image)});
  }
  return frames;
}

std::vector<GroundTruthBox> load_ground_truth(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<GroundTruthBox> boxes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::replace(line.begin(), line.end(), '\t', ',');
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4)
      throw ParseError("expected 4 fields x,y,w,h but found " + std::to_string(fields.size()),
                       line_no);
    int values[4];
    for (int k = 0; k < 4; ++k) {
      try {
        std::size_t used = 0;
        const double v = std::stod(fields[static_cast<std::size_t>(k)], &used);
        const auto rest = fields[static_cast<std::size_t>(k)].substr(used);
        if (rest.find_first_not_of(" ") != std::string::npos)
          throw ParseError("invalid number '" + fields[static_cast<std::size_t>(k)] + "'", line_no);
        values[k] = static_cast<int>(std::lround(v));
      } catch (const std::logic_error&) {
        throw ParseError("invalid number '" + fields[static_cast<std::size_t>(k)] + "'", line_no);
      }
    }
    if (std::all_of(std::begin(values), std::end(values), [](int v) { return v == 0; })) {
      boxes.push_back({line_no, 0, 0, 0, 0, false});
      continue;
    }
    if (values[2] <= 0 || values[3] <= 0)
      throw FormatError("line " + std::to_string(line_no) + ": box width and height must be positive");
    boxes.push_back({line_no, values[0], values[1], values[2], values[3], true});
  }
  return boxes;
}

void write_ground_truth(const fs::path& path, const std::vector<GroundTruthBox>& boxes) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& b : boxes) {
    if (b.present)
      out << b.x << ',' << b.y << ',' << b.w << ',' << b.h << '\n';
    else
      out << "0,0,0,0\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_detections(const fs::path& path, std::vector<DetectionRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
  });
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "frame,id,x,y,w,h\n";
  for (const auto& r : records)
    out << r.frame << ',' << r.id << ',' << r.box.x << ',' << r.box.y << ',' << r.box.w << ','
        << r.box.h << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<DetectionRecord> read_detections(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<DetectionRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "frame,id,x,y,w,h") throw ParseError("missing detections header", 1);
      continue;
    }
    if (line.empty()) continue;
    DetectionRecord r;
    char c[5];
    std::stringstream ss(line);
    if (!(ss >> r.frame >> c[0] >> r.id >> c[1] >> r.box.x >> c[2] >> r.box.y >> c[3] >> r.box.w >>
          c[4] >> r.box.h) ||
        std::any_of(std::begin(c), std::end(c), [](char ch) { return ch != ','; }))
      throw ParseError("expected frame,id,x,y,w,h", line_no);
    records.push_back(r);
  }
  return records;
}

}  // namespace mctrack
