#pragma once

// Frame sequences: landmark/patch containers, JSONL + PGM file I/O and a
// synthetic lip-motion generator for desk-scale experiments.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lipread/error.hpp"
#include "lipread/lexicon.hpp"

namespace lipread {

// ---------------------------------------------------------------------------
// Basic lip shapes

enum class LipShape : std::uint8_t { closed, a, o, u, i, e, mid1, mid2 };

inline constexpr std::size_t kShapeCount = 8;

inline std::string_view to_string(LipShape s) {
  static constexpr std::array<std::string_view, kShapeCount> names = {
      "closed", "a", "o", "u", "i", "e", "mid1", "mid2"};
  return names[static_cast<std::size_t>(s)];
}

inline std::optional<LipShape> try_parse_shape(std::string_view s) {
  for (std::size_t k = 0; k < kShapeCount; ++k)
    if (to_string(static_cast<LipShape>(k)) == s) return static_cast<LipShape>(k);
  return std::nullopt;
}

inline LipShape parse_shape(std::string_view s) {
  if (auto v = try_parse_shape(s)) return *v;
  throw ValidationError("unknown lip shape '" + std::string(s) + "'");
}

inline std::size_t shape_index(LipShape s) { return static_cast<std::size_t>(s); }

// Key shapes a viseme passes through; double visemes have two.
inline std::vector<LipShape> viseme_key_shapes(Viseme v) {
  switch (v) {
    case Viseme::a: return {LipShape::a};
    case Viseme::o: return {LipShape::o};
    case Viseme::u: return {LipShape::u};
    case Viseme::i: return {LipShape::i};
    case Viseme::e: return {LipShape::e};
    case Viseme::m: return {LipShape::closed};
    case Viseme::sil: return {LipShape::closed};
    case Viseme::we: return {LipShape::u, LipShape::e};
    case Viseme::wi: return {LipShape::u, LipShape::i};
    case Viseme::wa: return {LipShape::o, LipShape::a};
    case Viseme::wo: return {LipShape::u, LipShape::mid1};
  }
  return {LipShape::closed};
}

// ---------------------------------------------------------------------------
// Frames

struct Point {
  double x = 0;
  double y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

// 20 outer-contour points, clockwise from the left mouth corner (pt1):
// pt2..pt10 upper lip, pt11 right corner, pt12..pt20 lower lip.
// pt6 and pt16 are the upper and lower midpoints.
class Landmarks20 {
 public:
  static constexpr std::size_t kCount = 20;

  Landmarks20() = default;
  explicit Landmarks20(const std::array<Point, kCount>& pts) : pts_(pts) { validate(); }

  // 1-based, matching the landmark numbering.
  const Point& pt(std::size_t i) const { return pts_.at(i - 1); }
  Point& pt(std::size_t i) { return pts_.at(i - 1); }

  const std::array<Point, kCount>& points() const { return pts_; }

  void validate() const {
    for (const auto& p : pts_)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw ValidationError("landmark coordinates must be finite");
  }

  friend bool operator==(const Landmarks20&, const Landmarks20&) = default;

 private:
  std::array<Point, kCount> pts_{};
};

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool empty() const { return pixels.empty(); }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct Frame {
  int index = 0;
  Landmarks20 landmarks;
  std::optional<GrayImage> patch;
  std::string speaker;
  // Basic-shape annotation for training stills; absent on ordinary video.
  std::optional<LipShape> shape;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct FrameSequence {
  std::vector<Frame> frames;
  double fps = 30.0;
  std::optional<std::string> label;

  std::size_t size() const { return frames.size(); }
  bool has_patches() const { return !frames.empty() && frames.front().patch.has_value(); }

  void validate() const {
    if (frames.empty()) throw ValidationError("frame sequence is empty");
    for (std::size_t t = 0; t < frames.size(); ++t) {
      const auto& f = frames[t];
      f.landmarks.validate();
      if (t > 0 && f.index <= frames[t - 1].index)
        throw ValidationError("frame indices must be strictly increasing (frame " +
                              std::to_string(f.index) + ")");
      if (f.patch.has_value() != frames.front().patch.has_value())
        throw ValidationError("frame " + std::to_string(f.index) + ": patches must be all present or all absent");
      if (f.patch) {
        if (f.patch->width < 8 || f.patch->height < 8)
          throw ValidationError("frame " + std::to_string(f.index) + ": patch smaller than 8x8");
        if (f.patch->width != frames.front().patch->width || f.patch->height != frames.front().patch->height)
          throw ValidationError("frame " + std::to_string(f.index) + ": patch size differs from frame " +
                                std::to_string(frames.front().index));
      }
    }
  }

  friend bool operator==(const FrameSequence&, const FrameSequence&) = default;
};

// ---------------------------------------------------------------------------
// PGM (binary P5, 8-bit)

inline GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open patch '" + path.string() + "'");
  auto token = [&]() {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) break;
        continue;
      }
      tok += c;
    }
    return tok;
  };
  if (token() != "P5") throw IoError("'" + path.string() + "' is not a binary PGM (P5)");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(token());
    h = std::stoi(token());
    maxval = std::stoi(token());
  } catch (const std::exception&) {
    throw IoError("bad PGM header in '" + path.string() + "'");
  }
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
    throw IoError("unsupported PGM geometry in '" + path.string() + "'");
  GrayImage img(w, h);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    throw IoError("truncated PGM '" + path.string() + "'");
  return img;
}

inline void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write patch '" + path.string() + "'");
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// JSONL landmark files
//
// Optional first line: {"fps": 30.0, "label": "m a"}
// Then one line per frame:
//   {"frame": 0, "speaker": "s1", "points": [[x,y] x20], "patch": "rel.pgm", "shape": "a"}
// "patch" and "shape" are optional.

inline std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

// Round to the 6-decimal file precision.
inline double quantize6(double v) { return std::round(v * 1e6) / 1e6; }

inline FrameSequence parse_sequence(std::istream& in, const std::filesystem::path& base_dir) {
  using nlohmann::json;
  FrameSequence seq;
  std::string line;
  std::size_t lineno = 0;
  bool seen_frame = false;
  std::map<int, std::size_t> seen_index;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
    }
    if (!j.is_object()) throw ParseError("expected a JSON object", lineno);
    try {
      if (!j.contains("frame")) {
        if (seen_frame || !(j.contains("fps") || j.contains("label")))
          throw ParseError("missing \"frame\"", lineno);
        if (j.contains("fps")) seq.fps = j.at("fps").get<double>();
        if (j.contains("label") && !j.at("label").is_null()) seq.label = j.at("label").get<std::string>();
        continue;
      }
      seen_frame = true;
      Frame f;
      f.index = j.at("frame").get<int>();
      f.speaker = j.value("speaker", std::string());
      const auto& pts = j.at("points");
      if (!pts.is_array()) throw ParseError("\"points\" must be an array", lineno);
      if (pts.size() != Landmarks20::kCount)
        throw ValidationError("frame " + std::to_string(f.index) + ": expected 20 landmarks, got " +
                              std::to_string(pts.size()) + " (line " + std::to_string(lineno) + ")");
      std::array<Point, Landmarks20::kCount> arr{};
      for (std::size_t k = 0; k < arr.size(); ++k) {
        const auto& p = pts[k];
        if (!p.is_array() || p.size() != 2) throw ParseError("each point must be [x, y]", lineno);
        arr[k] = {p[0].get<double>(), p[1].get<double>()};
      }
      f.landmarks = Landmarks20(arr);
      if (j.contains("shape") && !j.at("shape").is_null()) f.shape = parse_shape(j.at("shape").get<std::string>());
      if (j.contains("patch") && !j.at("patch").is_null()) {
        f.patch = read_pgm(base_dir / j.at("patch").get<std::string>());
        const auto* first = seq.frames.empty() ? nullptr : &seq.frames.front();
        if (first && first->patch &&
            (first->patch->width != f.patch->width || first->patch->height != f.patch->height))
            throw IoError("frame " + std::to_string(f.index) + ": patch size " + std::to_string(f.patch->width) +
                          "x" + std::to_string(f.patch->height) + " differs from earlier frames");
      }
      if (!seq.frames.empty() && seq.frames.front().patch.has_value() != f.patch.has_value())
        throw IoError("frame " + std::to_string(f.index) + ": patch missing or unexpected");
      if (!seen_index.emplace(f.index, lineno).second)
        throw ValidationError("duplicate frame index " + std::to_string(f.index) + " (line " +
                              std::to_string(lineno) + ")");
      seq.frames.push_back(std::move(f));
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad field: ") + e.what(), lineno);
    }
  }
  std::stable_sort(seq.frames.begin(), seq.frames.end(),
                   [](const Frame& a, const Frame& b) { return a.index < b.index; });
  seq.validate();
  return seq;
}

inline FrameSequence load_sequence(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open landmark file '" + path.string() + "'");
  return parse_sequence(in, path.parent_path());
}

// Writes the JSONL file; patches go next to it as <stem>_<frame>.pgm.
inline void save_sequence(const FrameSequence& seq, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  nlohmann::json meta = {{"fps", seq.fps}};
  if (seq.label) meta["label"] = *seq.label;
  out << meta.dump() << '\n';
  auto stem = path.stem().string();
  for (const auto& f : seq.frames) {
    out << "{\"frame\":" << f.index << ",\"speaker\":" << nlohmann::json(f.speaker).dump() << ",\"points\":[";
    for (std::size_t k = 0; k < Landmarks20::kCount; ++k) {
      const auto& p = f.landmarks.points()[k];
      out << (k ? "," : "") << '[' << format_fixed6(p.x) << ',' << format_fixed6(p.y) << ']';
    }
    out << ']';
    if (f.patch) {
      std::string name = stem + "_" + std::to_string(f.index) + ".pgm";
      write_pgm(path.parent_path() / name, *f.patch);
      out << ",\"patch\":" << nlohmann::json(name).dump();
    }
    if (f.shape) out << ",\"shape\":\"" << to_string(*f.shape) << '"';
    out << "}\n";
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Synthesis

struct SynthConfig {
  int frames_per_viseme = 6;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  int patch_w = 32;
  int patch_h = 24;
  bool render_patches = true;
  double fps = 30.0;
  // Uniform mouth size factor; emulates speaker/camera-distance differences.
  double mouth_scale = 1.0;
  std::string speaker = "synth";

  void validate() const {
    if (frames_per_viseme < 2) throw ValidationError("frames_per_viseme must be >= 2");
    if (!(noise_sigma >= 0)) throw ValidationError("noise_sigma must be >= 0");
    if (patch_w < 8 || patch_h < 8) throw ValidationError("patch size must be at least 8x8");
    if (!(mouth_scale > 0)) throw ValidationError("mouth_scale must be > 0");
  }
};

// key = value lines; '#' and ';' start comments; [sections] are ignored.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", lineno);
    auto value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    kv[trim(line.substr(0, eq))] = value;
  }
  return kv;
}

inline SynthConfig synth_config_from(const std::map<std::string, std::string>& kv, SynthConfig cfg = {}) {
  for (const auto& [key, value] : kv) {
    try {
      if (key == "frames_per_viseme") cfg.frames_per_viseme = std::stoi(value);
      else if (key == "noise_sigma") cfg.noise_sigma = std::stod(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "patch_w") cfg.patch_w = std::stoi(value);
      else if (key == "patch_h") cfg.patch_h = std::stoi(value);
      else if (key == "render_patches") cfg.render_patches = value == "1" || value == "true";
      else if (key == "fps") cfg.fps = std::stod(value);
      else if (key == "mouth_scale") cfg.mouth_scale = std::stod(value);
      else if (key == "speaker") cfg.speaker = value;
      else throw ValidationError("unknown synth config key '" + key + "'");
    } catch (const std::logic_error&) {
      throw ValidationError("bad value for '" + key + "': '" + value + "'");
    }
  }
  cfg.validate();
  return cfg;
}

inline SynthConfig load_synth_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open synth config '" + path.string() + "'");
  return synth_config_from(parse_key_values(in));
}

namespace synth_detail {

struct Geometry {
  double half_width;
  double upper;  // corner line to upper midpoint
  double lower;  // corner line to lower midpoint
};

// Sized for a 32x24 patch.
inline Geometry prototype_geometry(LipShape s) {
  switch (s) {
    case LipShape::closed: return {10.0, 1.5, 1.5};
    case LipShape::a: return {9.5, 5.0, 7.5};
    case LipShape::o: return {6.5, 5.0, 5.5};
    case LipShape::u: return {4.5, 3.5, 3.5};
    case LipShape::i: return {12.0, 2.5, 3.0};
    case LipShape::e: return {11.0, 4.0, 5.0};
    case LipShape::mid1: return {8.0, 4.0, 5.5};
    case LipShape::mid2: return {9.0, 2.8, 3.2};
  }
  return {10.0, 1.5, 1.5};
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace synth_detail

// Prototype landmarks of a basic shape, centred in a patch of cfg's size.
inline Landmarks20 prototype_landmarks(LipShape s, const SynthConfig& cfg = {}) {
  using namespace synth_detail;
  auto g = prototype_geometry(s);
  double scale = std::min(cfg.patch_w / 32.0, cfg.patch_h / 24.0) * cfg.mouth_scale;
  double cx = cfg.patch_w / 2.0, cy = cfg.patch_h / 2.0;
  std::array<Point, 20> pts{};
  for (int k = 0; k <= 10; ++k) {  // pt1..pt11 over the upper lip
    double th = kPi - k * kPi / 10.0;
    pts[k] = {cx + scale * g.half_width * std::cos(th), cy - scale * g.upper * std::sin(th)};
  }
  for (int k = 1; k <= 9; ++k) {  // pt12..pt20 back along the lower lip
    double th = k * kPi / 10.0;
    pts[10 + k] = {cx + scale * g.half_width * std::cos(th), cy + scale * g.lower * std::sin(th)};
  }
  for (auto& p : pts) p = {quantize6(p.x), quantize6(p.y)};
  return Landmarks20(pts);
}

// Renders a lip patch from the corner and midpoint landmarks: skin
// background, lip band, dark mouth opening with an upper-teeth strip.
// 4x4 supersampling keeps intensities continuous in the landmarks.
inline GrayImage render_patch(const Landmarks20& lm, int width, int height) {
  const double cx = (lm.pt(1).x + lm.pt(11).x) / 2.0;
  const double cy = (lm.pt(1).y + lm.pt(11).y) / 2.0;
  const double w = std::abs(lm.pt(11).x - lm.pt(1).x) / 2.0;
  const double hu = std::max(0.0, cy - lm.pt(6).y);
  const double hl = std::max(0.0, lm.pt(16).y - cy);
  const double lip = 1.5 * std::min(width / 32.0, height / 24.0);
  const double wi = 0.8 * w;
  const double hui = std::max(0.0, hu - lip);
  const double hli = std::max(0.0, hl - lip);
  constexpr double kSkin = 175, kLip = 110, kMouth = 35, kTeeth = 225;

  auto shade = [&](double x, double y) {
    double dx = x - cx;
    auto inside = [&](double half_w, double up, double down) {
      if (half_w <= 0 || std::abs(dx) >= half_w) return false;
      double r = std::sqrt(1.0 - (dx / half_w) * (dx / half_w));
      return y <= cy ? (cy - y) < up * r : (y - cy) < down * r;
    };
    if (inside(wi, hui, hli)) {
      double r = std::sqrt(std::max(0.0, 1.0 - (dx / wi) * (dx / wi)));
      double top = cy - hui * r;
      return (y < cy && y - top < 0.35 * hui) ? kTeeth : kMouth;
    }
    if (inside(w, hu, hl)) return kLip;
    return kSkin;
  };

  GrayImage img(width, height);
  constexpr int kSub = 4;
  for (int py = 0; py < height; ++py)
    for (int px = 0; px < width; ++px) {
      double acc = 0;
      for (int sy = 0; sy < kSub; ++sy)
        for (int sx = 0; sx < kSub; ++sx) acc += shade(px + (sx + 0.5) / kSub, py + (sy + 0.5) / kSub);
      img.at(px, py) = static_cast<std::uint8_t>(std::lround(acc / (kSub * kSub)));
    }
  return img;
}

namespace synth_detail {

inline Landmarks20 lerp(const Landmarks20& a, const Landmarks20& b, double t) {
  std::array<Point, 20> pts{};
  for (std::size_t k = 0; k < 20; ++k) {
    const auto& p = a.points()[k];
    const auto& q = b.points()[k];
    pts[k] = {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
  }
  return Landmarks20(pts);
}

inline Frame finish_frame(int index, Landmarks20 lm, std::optional<LipShape> shape, const SynthConfig& cfg,
                          std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::array<Point, 20> pts = lm.points();
  for (auto& p : pts) {
    double nx = cfg.noise_sigma > 0 ? cfg.noise_sigma * noise(rng) : 0.0;
    double ny = cfg.noise_sigma > 0 ? cfg.noise_sigma * noise(rng) : 0.0;
    p = {quantize6(p.x + nx), quantize6(p.y + ny)};
  }
  Frame f;
  f.index = index;
  f.landmarks = Landmarks20(pts);
  f.speaker = cfg.speaker;
  f.shape = shape;
  if (cfg.render_patches) f.patch = render_patch(f.landmarks, cfg.patch_w, cfg.patch_h);
  return f;
}

}  // namespace synth_detail

// Each viseme occupies frames_per_viseme frames. Its key shapes are anchored
// inside that segment (the first anchor of the script is pulled to frame 0,
// the last to frame T-1) and landmarks interpolate linearly between anchors.
// Frames are annotated with the nearest anchor's shape.
inline FrameSequence synthesize_sequence(const VisemeSeq& script, const SynthConfig& cfg) {
  cfg.validate();
  if (script.empty()) throw ValidationError("synthesis script is empty");
  const int fpv = cfg.frames_per_viseme;
  const int total = fpv * static_cast<int>(script.size());

  struct Anchor {
    double time;
    LipShape shape;
  };
  std::vector<Anchor> anchors;
  for (std::size_t t = 0; t < script.size(); ++t) {
    auto keys = viseme_key_shapes(script[t]);
    for (std::size_t k = 0; k < keys.size(); ++k) {
      // Whole-frame anchors so every key shape is rendered exactly once.
      double pos = static_cast<double>(t) * fpv + std::round((fpv - 1) * (k + 0.5) / static_cast<double>(keys.size()));
      anchors.push_back({pos, keys[k]});
    }
  }
  anchors.front().time = 0.0;
  anchors.back().time = std::max(anchors.back().time, static_cast<double>(total - 1));
  if (anchors.size() == 1) anchors.back().time = 0.0;

  std::vector<Landmarks20> protos;
  for (std::size_t k = 0; k < kShapeCount; ++k) protos.push_back(prototype_landmarks(static_cast<LipShape>(k), cfg));

  std::mt19937_64 rng(cfg.seed);
  FrameSequence seq;
  seq.fps = cfg.fps;
  seq.label = join(script);
  std::size_t seg = 0;
  for (int n = 0; n < total; ++n) {
    while (seg + 1 < anchors.size() && anchors[seg + 1].time <= n) ++seg;
    Landmarks20 lm;
    LipShape shape;
    if (seg + 1 >= anchors.size()) {
      lm = protos[shape_index(anchors[seg].shape)];
      shape = anchors[seg].shape;
    } else {
      const auto& lo = anchors[seg];
      const auto& hi = anchors[seg + 1];
      double t = (n - lo.time) / (hi.time - lo.time);
      lm = synth_detail::lerp(protos[shape_index(lo.shape)], protos[shape_index(hi.shape)], t);
      shape = t <= 0.5 ? lo.shape : hi.shape;
    }
    seq.frames.push_back(synth_detail::finish_frame(n, lm, shape, cfg, rng));
  }
  return seq;
}

inline FrameSequence synthesize_sequence(const std::vector<std::string>& symbols, const SynthConfig& cfg) {
  VisemeSeq script;
  for (const auto& s : symbols) script.push_back(parse_viseme(s));
  return synthesize_sequence(script, cfg);
}

// count jittered stills of one basic shape, annotated with it.
inline FrameSequence synthesize_stills(LipShape shape, int count, const SynthConfig& cfg, int first_index = 0) {
  cfg.validate();
  if (count < 1) throw ValidationError("still count must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  auto proto = prototype_landmarks(shape, cfg);
  FrameSequence seq;
  seq.fps = cfg.fps;
  for (int n = 0; n < count; ++n) seq.frames.push_back(synth_detail::finish_frame(first_index + n, proto, shape, cfg, rng));
  return seq;
}

// Stills for all 8 shapes in one sequence (per-shape seeds derived from cfg.seed).
inline FrameSequence synthesize_training_stills(int per_shape, const SynthConfig& cfg) {
  FrameSequence all;
  all.fps = cfg.fps;
  for (std::size_t k = 0; k < kShapeCount; ++k) {
    SynthConfig c = cfg;
    c.seed = cfg.seed * 1000003ULL + k;
    auto part = synthesize_stills(static_cast<LipShape>(k), per_shape, c, static_cast<int>(all.frames.size()));
    for (auto& f : part.frames) all.frames.push_back(std::move(f));
  }
  return all;
}

}  // namespace lipread
