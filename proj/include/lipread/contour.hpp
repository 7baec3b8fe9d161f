#pragma once

// Landmark-distance contour parameters and their normalization by the
// speaker's closed-lip distances.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lipread/corpus.hpp"
#include "lipread/error.hpp"
#include "lipread/shapemodel.hpp"

namespace lipread {

inline constexpr std::size_t kContourDim = 6;

// d1 mouth width, d2/d3 upper/lower inner widths, d4 mid height,
// d5/d6 left/right heights.
using ContourParams = std::array<double, kContourDim>;

struct ClosedLipParams {
  enum class Source { direct, indirect };

  ContourParams d{};
  Source source = Source::direct;
};

inline ContourParams contour_params(const Landmarks20& lm) {
  return {std::abs(lm.pt(1).x - lm.pt(11).x),  std::abs(lm.pt(3).x - lm.pt(9).x),
          std::abs(lm.pt(13).x - lm.pt(19).x), std::abs(lm.pt(6).y - lm.pt(16).y),
          std::abs(lm.pt(3).y - lm.pt(19).y),  std::abs(lm.pt(9).y - lm.pt(13).y)};
}

inline std::array<double, kContourDim> contour_feature(const ContourParams& d, const ClosedLipParams& dc) {
  std::array<double, kContourDim> out{};
  for (std::size_t k = 0; k < kContourDim; ++k) {
    if (!(dc.d[k] > 0)) throw ValidationError("closed-lip parameter d" + std::to_string(k + 1) + "c must be > 0");
    out[k] = d[k] / dc.d[k];
  }
  return out;
}

// Per speaker (plus "global"): shape index -> ratio closed/shape for each of
// the six parameters. Multiplying a shape's mean parameters by its row gives
// closed-lip units.
struct GammaTable {
  static constexpr const char* kGlobal = "global";

  std::size_t closed_index = shape_index(LipShape::closed);
  std::map<std::string, std::map<std::size_t, ContourParams>> speakers;

  // Speaker entry, falling back to "global"; nullptr when neither exists.
  const std::map<std::size_t, ContourParams>* lookup(const std::string& speaker) const {
    if (auto it = speakers.find(speaker); it != speakers.end()) return &it->second;
    if (auto it = speakers.find(kGlobal); it != speakers.end()) return &it->second;
    return nullptr;
  }

  void validate() const {
    for (const auto& [spk, rows] : speakers)
      for (const auto& [j, g] : rows) {
        if (j == closed_index) throw ValidationError("gamma table: row for the closed shape ('" + spk + "')");
        for (double v : g)
          if (!(v > 0) || !std::isfinite(v)) throw ValidationError("gamma table: entries must be positive ('" + spk + "')");
      }
  }
};

namespace contour_detail {

inline std::size_t argmax(std::span<const double> v, std::size_t skip = static_cast<std::size_t>(-1)) {
  std::size_t best = static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i == skip) continue;
    if (best == static_cast<std::size_t>(-1) || v[i] > v[best]) best = i;
  }
  return best;
}

inline ContourParams mean_params(const std::vector<ContourParams>& ds) {
  ContourParams m{};
  for (const auto& d : ds)
    for (std::size_t k = 0; k < kContourDim; ++k) m[k] += d[k];
  for (auto& v : m) v /= static_cast<double>(ds.size());
  return m;
}

}  // namespace contour_detail

// Direct path: mean parameters of frames whose closed-shape region component
// exceeds 1. Indirect path (no such frame): dominant non-closed shape j over
// the video, mean parameters of frames assigned to j, scaled by gamma row j.
inline ClosedLipParams closed_lip_params(const FrameSequence& seq, const std::vector<Vec>& rgn, std::size_t closed_index,
                                         const GammaTable& gamma) {
  if (rgn.size() != seq.size()) throw ValidationError("closed_lip_params: region features not aligned with frames");
  if (seq.size() == 0) throw ValidationError("closed_lip_params: empty sequence");
  std::vector<ContourParams> d;
  d.reserve(seq.size());
  for (const auto& f : seq.frames) d.push_back(contour_params(f.landmarks));

  ClosedLipParams out;
  std::vector<ContourParams> qualifying;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    if (closed_index >= rgn[t].size()) throw ValidationError("closed_lip_params: closed index out of range");
    if (rgn[t][closed_index] > 1.0) qualifying.push_back(d[t]);
  }

  if (!qualifying.empty()) {
    out.d = contour_detail::mean_params(qualifying);
    out.source = ClosedLipParams::Source::direct;
  } else {
    const std::size_t S = rgn.front().size();
    Vec avg(S, 0.0);
    for (const auto& r : rgn)
      for (std::size_t i = 0; i < S; ++i) avg[i] += r[i] / static_cast<double>(rgn.size());
    const std::size_t j = contour_detail::argmax(avg, closed_index);

    std::vector<ContourParams> assigned;
    for (std::size_t t = 0; t < seq.size(); ++t)
      if (contour_detail::argmax(rgn[t]) == j) assigned.push_back(d[t]);
    // No frame wins outright for j: fall back to frames where j leads the
    // non-closed shapes, then to the whole video.
    if (assigned.empty())
      for (std::size_t t = 0; t < seq.size(); ++t)
        if (contour_detail::argmax(rgn[t], closed_index) == j) assigned.push_back(d[t]);
    if (assigned.empty()) assigned = d;

    const std::string& speaker = seq.frames.front().speaker;
    const auto* rows = gamma.lookup(speaker);
    if (!rows) throw ValidationError("no gamma table for speaker '" + speaker + "' and no global entry");
    auto row = rows->find(j);
    if (row == rows->end())
      throw ValidationError("gamma table has no row for shape " + std::to_string(j) + " (speaker '" + speaker + "')");
    auto mean = contour_detail::mean_params(assigned);
    for (std::size_t k = 0; k < kContourDim; ++k) out.d[k] = row->second[k] * mean[k];
    out.source = ClosedLipParams::Source::indirect;
  }
  for (std::size_t k = 0; k < kContourDim; ++k)
    if (!(out.d[k] > 0))
      throw ValidationError("closed-lip parameter d" + std::to_string(k + 1) + "c is not positive");
  return out;
}

inline ClosedLipParams closed_lip_params(const FrameSequence& seq, const std::vector<Vec>& rgn,
                                         const CalibratedShapeModel& model, const GammaTable& gamma) {
  return closed_lip_params(seq, rgn, model.closed_index, gamma);
}

// Gamma rows from shape-annotated stills: per speaker and pooled ("global").
inline GammaTable estimate_gamma(const std::vector<const Frame*>& stills, std::size_t closed_index = 0,
                                 std::size_t shape_count = kShapeCount) {
  std::map<std::string, std::vector<std::vector<ContourParams>>> groups;
  std::vector<std::vector<ContourParams>> pooled(shape_count);
  for (const Frame* f : stills) {
    if (!f->shape) continue;
    auto s = shape_index(*f->shape);
    if (s >= shape_count) throw ValidationError("estimate_gamma: shape index out of range");
    auto& g = groups[f->speaker];
    g.resize(shape_count);
    auto d = contour_params(f->landmarks);
    g[s].push_back(d);
    pooled[s].push_back(d);
  }
  if (groups.empty()) throw ValidationError("estimate_gamma: no shape-annotated frames");

  auto rows_for = [&](const std::string& who, const std::vector<std::vector<ContourParams>>& g) {
    if (g[closed_index].empty()) throw ValidationError("estimate_gamma: no closed-lip frames for '" + who + "'");
    auto closed = contour_detail::mean_params(g[closed_index]);
    std::map<std::size_t, ContourParams> rows;
    for (std::size_t j = 0; j < shape_count; ++j) {
      if (j == closed_index) continue;
      if (g[j].empty())
        throw ValidationError("estimate_gamma: no frames of shape " + std::string(to_string(static_cast<LipShape>(j))) +
                              " for '" + who + "'");
      auto m = contour_detail::mean_params(g[j]);
      ContourParams r{};
      for (std::size_t k = 0; k < kContourDim; ++k) {
        if (!(m[k] > 0))
          throw ValidationError("estimate_gamma: zero mean d" + std::to_string(k + 1) + " for shape " +
                                std::string(to_string(static_cast<LipShape>(j))) + " ('" + who + "')");
        r[k] = closed[k] / m[k];
      }
      rows[j] = r;
    }
    return rows;
  };

  GammaTable table;
  table.closed_index = closed_index;
  for (const auto& [spk, g] : groups) table.speakers[spk] = rows_for(spk, g);
  table.speakers[GammaTable::kGlobal] = rows_for(GammaTable::kGlobal, pooled);
  return table;
}

inline GammaTable estimate_gamma(const std::vector<FrameSequence>& seqs, std::size_t closed_index = 0) {
  std::vector<const Frame*> frames;
  for (const auto& s : seqs)
    for (const auto& f : s.frames) frames.push_back(&f);
  return estimate_gamma(frames, closed_index);
}

// {"closed_index": 0, "speakers": {"s1": {"a": [6 values], ...}, "global": {...}}}
inline void to_json(nlohmann::json& j, const GammaTable& g) {
  nlohmann::json spk = nlohmann::json::object();
  for (const auto& [name, rows] : g.speakers) {
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [shape, vals] : rows) r[std::string(to_string(static_cast<LipShape>(shape)))] = vals;
    spk[name] = r;
  }
  j = nlohmann::json{{"closed_index", g.closed_index}, {"speakers", spk}};
}

inline void from_json(const nlohmann::json& j, GammaTable& g) {
  g = {};
  g.closed_index = j.value("closed_index", std::size_t{0});
  for (const auto& [name, rows] : j.at("speakers").items())
    for (const auto& [shape, vals] : rows.items()) g.speakers[name][shape_index(parse_shape(shape))] = vals.get<ContourParams>();
  g.validate();
}

}  // namespace lipread
