#pragma once

// Per-frame observation vectors: smoothed static features (scaled region +
// contour blocks) followed by windowed landmark-velocity features.
//
// Column layout (26): rgn_1..rgn_8 | cont_d1..cont_d6 | 12 dynamic columns.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lipread/contour.hpp"
#include "lipread/corpus.hpp"
#include "lipread/error.hpp"
#include "lipread/shapemodel.hpp"

namespace lipread {

inline constexpr std::size_t kRegionDim = 8;
inline constexpr std::size_t kStaticDim = kRegionDim + kContourDim;  // 14
inline constexpr std::size_t kDynamicDim = 12;
inline constexpr std::size_t kObservationDim = kStaticDim + kDynamicDim;  // 26

using StaticFeature = std::array<double, kStaticDim>;
using DynamicFeature = std::array<double, kDynamicDim>;

struct ObservationVector {
  int frame = 0;
  Vec v;
};

struct PipeConfig {
  int W = 4;  // even; window spans W + 1 frames
  double s_rgn = 1.0;
  double s_cont = 1.0;
  // Ablation switches; a disabled block is dropped from the output.
  bool region_block = true;
  bool contour_block = true;
  bool dynamic_block = true;

  void validate() const {
    if (W < 0 || W % 2 != 0) throw ValidationError("window W must be even and >= 0");
    if (!(s_rgn > 0) || !(s_cont > 0)) throw ValidationError("scale factors must be > 0");
    if (!region_block && !contour_block && !dynamic_block) throw ValidationError("all feature blocks disabled");
  }

  std::size_t dim() const {
    return (region_block ? kRegionDim : 0) + (contour_block ? kContourDim : 0) + (dynamic_block ? kDynamicDim : 0);
  }
};

inline StaticFeature static_feature(std::span<const double> rgn, std::span<const double> cont, double s_rgn,
                                    double s_cont) {
  if (rgn.size() != kRegionDim || cont.size() != kContourDim)
    throw ValidationError("static_feature: expected 8 region and 6 contour values");
  if (!(s_rgn > 0) || !(s_cont > 0)) throw ValidationError("static_feature: scale factors must be > 0");
  StaticFeature out{};
  for (std::size_t i = 0; i < kRegionDim; ++i) out[i] = s_rgn * rgn[i];
  for (std::size_t k = 0; k < kContourDim; ++k) out[kRegionDim + k] = s_cont * cont[k];
  for (double v : out)
    if (!std::isfinite(v)) throw ValidationError("static_feature: non-finite value");
  return out;
}

namespace pipe_detail {

inline void check_window(int W) {
  if (W < 0 || W % 2 != 0) throw ValidationError("window W must be even and >= 0");
}

inline std::size_t clamp_index(long n, std::size_t T) {
  if (n < 0) return 0;
  if (static_cast<std::size_t>(n) >= T) return T - 1;
  return static_cast<std::size_t>(n);
}

// (landmark number, use y) for the 12 tracked coordinates.
inline constexpr std::array<std::pair<std::size_t, bool>, kDynamicDim> kTracked = {{
    {1, false}, {3, false}, {3, true}, {6, true}, {9, false}, {9, true},
    {11, false}, {13, false}, {13, true}, {16, true}, {19, false}, {19, true},
}};

inline std::array<double, kDynamicDim> tracked(const Landmarks20& lm) {
  std::array<double, kDynamicDim> out{};
  for (std::size_t c = 0; c < kDynamicDim; ++c) {
    const auto& p = lm.pt(kTracked[c].first);
    out[c] = kTracked[c].second ? p.y : p.x;
  }
  return out;
}

// Mean of the tracked coordinates over the clamped window centred on n.
inline std::array<double, kDynamicDim> window_mean(const FrameSequence& seq, long n, int W) {
  std::array<double, kDynamicDim> acc{};
  for (long k = -W / 2; k <= W / 2; ++k) {
    auto c = tracked(seq.frames[clamp_index(n + k, seq.size())].landmarks);
    for (std::size_t i = 0; i < kDynamicDim; ++i) acc[i] += c[i];
  }
  for (auto& v : acc) v /= static_cast<double>(W + 1);
  return acc;
}

}  // namespace pipe_detail

// Window of W + 1 frames centred on n; out-of-range indices clamp to the ends.
inline StaticFeature smooth_static(const std::vector<StaticFeature>& seq, std::size_t n, int W) {
  pipe_detail::check_window(W);
  if (seq.empty()) throw ValidationError("smooth_static: empty sequence");
  if (n >= seq.size()) throw ValidationError("smooth_static: frame out of range");
  StaticFeature acc{};
  for (long k = -W / 2; k <= W / 2; ++k) {
    const auto& f = seq[pipe_detail::clamp_index(static_cast<long>(n) + k, seq.size())];
    for (std::size_t i = 0; i < kStaticDim; ++i) acc[i] += f[i];
  }
  for (auto& v : acc) v /= static_cast<double>(W + 1);
  return acc;
}

// Difference of windowed coordinate means between frames n and n - 1; zero at n = 0.
inline DynamicFeature dynamic_feature(const FrameSequence& seq, std::size_t n, int W) {
  pipe_detail::check_window(W);
  if (n >= seq.size()) throw ValidationError("dynamic_feature: frame out of range");
  DynamicFeature out{};
  if (n == 0) return out;
  auto cur = pipe_detail::window_mean(seq, static_cast<long>(n), W);
  auto prev = pipe_detail::window_mean(seq, static_cast<long>(n) - 1, W);
  for (std::size_t i = 0; i < kDynamicDim; ++i) out[i] = cur[i] - prev[i];
  return out;
}

inline std::vector<ObservationVector> assemble_observations(const FrameSequence& seq, const CalibratedShapeModel& model,
                                                            const GammaTable& gamma, const PipeConfig& cfg = {}) {
  cfg.validate();
  seq.validate();
  if (model.shape_count() != kRegionDim)
    throw ValidationError("shape model must have exactly 8 shapes");
  const std::size_t T = seq.size();
  auto at_frame = [&](std::size_t t, auto&& fn) {
    try {
      return fn();
    } catch (const ValidationError& e) {
      throw ValidationError("frame " + std::to_string(seq.frames[t].index) + ": " + e.what());
    }
  };

  std::vector<Vec> rgn(T);
  for (std::size_t t = 0; t < T; ++t)
    rgn[t] = at_frame(t, [&] {
      if (!seq.frames[t].patch) throw ValidationError("no lip patch");
      return region_feature(model, *seq.frames[t].patch);
    });
  const auto closed = closed_lip_params(seq, rgn, model, gamma);

  std::vector<StaticFeature> stat(T);
  for (std::size_t t = 0; t < T; ++t)
    stat[t] = at_frame(t, [&] {
      auto cont = contour_feature(contour_params(seq.frames[t].landmarks), closed);
      return static_feature(rgn[t], cont, cfg.s_rgn, cfg.s_cont);
    });

  std::vector<ObservationVector> out(T);
  for (std::size_t t = 0; t < T; ++t) {
    auto smooth = smooth_static(stat, t, cfg.W);
    auto dyn = dynamic_feature(seq, t, cfg.W);
    auto& o = out[t];
    o.frame = seq.frames[t].index;
    o.v.reserve(cfg.dim());
    if (cfg.region_block) o.v.insert(o.v.end(), smooth.begin(), smooth.begin() + kRegionDim);
    if (cfg.contour_block) o.v.insert(o.v.end(), smooth.begin() + kRegionDim, smooth.end());
    if (cfg.dynamic_block) o.v.insert(o.v.end(), dyn.begin(), dyn.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Feature CSV

inline std::vector<std::string> feature_columns(const PipeConfig& cfg = {}) {
  std::vector<std::string> cols;
  if (cfg.region_block)
    for (std::size_t i = 1; i <= kRegionDim; ++i) cols.push_back("rgn_" + std::to_string(i));
  if (cfg.contour_block)
    for (std::size_t k = 1; k <= kContourDim; ++k) cols.push_back("cont_d" + std::to_string(k));
  if (cfg.dynamic_block)
    for (const auto& [pt, y] : pipe_detail::kTracked) cols.push_back(std::string("dyn_") + (y ? "y" : "x") + std::to_string(pt));
  return cols;
}

inline void write_feature_csv(std::ostream& out, const std::vector<ObservationVector>& obs, const PipeConfig& cfg = {}) {
  auto cols = feature_columns(cfg);
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << "\n";
  for (const auto& o : obs) {
    if (o.v.size() != cols.size()) throw ValidationError("observation width does not match the CSV header");
    for (std::size_t c = 0; c < o.v.size(); ++c) out << (c ? "," : "") << format_fixed6(o.v[c]);
    out << "\n";
  }
}

inline void save_feature_csv(const std::filesystem::path& path, const std::vector<ObservationVector>& obs,
                             const PipeConfig& cfg = {}) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_feature_csv(out, obs, cfg);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline std::vector<Vec> parse_feature_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError("feature CSV is empty");
  std::size_t width = 1;
  for (char c : line) width += c == ',';
  std::vector<Vec> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Vec row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::logic_error&) {
        throw ParseError("bad number '" + cell + "'", lineno);
      }
    }
    if (row.size() != width) throw ParseError("expected " + std::to_string(width) + " columns", lineno);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("feature CSV has no rows");
  return rows;
}

inline std::vector<Vec> load_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open feature CSV '" + path.string() + "'");
  return parse_feature_csv(in);
}

inline std::vector<Vec> observation_values(const std::vector<ObservationVector>& obs) {
  std::vector<Vec> out;
  out.reserve(obs.size());
  for (const auto& o : obs) out.push_back(o.v);
  return out;
}

}  // namespace lipread
