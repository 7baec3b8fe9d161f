#pragma once

// Information-gain ranking of DCT coefficients.
//
// For coefficient k every sample is assigned to the class whose mean value of
// k is nearest (ties to the lower class). The gain is the drop from the class
// entropy of the whole set to the size-weighted class entropy of those
// assignment subsets. All entropies are in nats.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <json.hpp>

#include "lipread/corpus.hpp"
#include "lipread/error.hpp"
#include "lipread/transform.hpp"

namespace lipread {

struct LabeledDctSet {
  std::size_t num_classes = kShapeCount;
  std::vector<DctMatrix> samples;
  std::vector<std::size_t> labels;  // 0-based class per sample

  void add(DctMatrix m, std::size_t label) {
    if (label >= num_classes) throw ValidationError("class label " + std::to_string(label) + " out of range");
    if (!samples.empty() && m.size() != samples.front().size())
      throw ValidationError("all DCT matrices in a set must have the same size");
    samples.push_back(std::move(m));
    labels.push_back(label);
  }

  std::size_t size() const { return samples.size(); }
  std::size_t coefficient_count() const { return samples.empty() ? 0 : samples.front().size(); }

  std::vector<std::size_t> counts() const {
    std::vector<std::size_t> c(num_classes, 0);
    for (auto l : labels) ++c[l];
    return c;
  }
};

struct SelectionResult {
  std::vector<std::size_t> indices;
  std::vector<double> gains;  // descending

  std::size_t size() const { return indices.size(); }
};

inline double dataset_entropy(std::span<const std::size_t> counts) {
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  if (total <= 0) throw ValidationError("dataset_entropy: empty dataset");
  double h = 0;
  for (auto c : counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return h;
}

namespace ig_detail {

// Per-class mean of coefficient k.
inline std::vector<double> centroids(const LabeledDctSet& s, std::size_t k) {
  std::vector<double> sum(s.num_classes, 0.0);
  std::vector<std::size_t> n(s.num_classes, 0);
  for (std::size_t t = 0; t < s.size(); ++t) {
    sum[s.labels[t]] += s.samples[t].coeffs[k];
    ++n[s.labels[t]];
  }
  for (std::size_t i = 0; i < s.num_classes; ++i) {
    if (n[i] == 0) throw ValidationError("class " + std::to_string(i) + " has no samples; centroid undefined");
    sum[i] /= static_cast<double>(n[i]);
  }
  return sum;
}

}  // namespace ig_detail

// Index of the nearest centroid, lowest index on ties.
inline std::size_t nearest_centroid(double x, std::span<const double> centroids) {
  std::size_t best = 0;
  double best_d = std::abs(x - centroids[0]);
  for (std::size_t i = 1; i < centroids.size(); ++i) {
    double d = std::abs(x - centroids[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

inline double information_gain(const LabeledDctSet& s, std::size_t k) {
  if (s.size() == 0) throw ValidationError("information_gain: empty set");
  if (k >= s.coefficient_count()) throw ValidationError("information_gain: coefficient index out of range");
  const auto c = ig_detail::centroids(s, k);
  const std::size_t m = s.num_classes;
  // membership[i * m + j]: samples of class j assigned to subset i
  std::vector<std::size_t> membership(m * m, 0);
  for (std::size_t t = 0; t < s.size(); ++t)
    ++membership[nearest_centroid(s.samples[t].coeffs[k], c) * m + s.labels[t]];

  const double total = static_cast<double>(s.size());
  double split = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::span<const std::size_t> row(membership.data() + i * m, m);
    std::size_t n_i = std::accumulate(row.begin(), row.end(), std::size_t{0});
    if (n_i == 0) continue;
    split += static_cast<double>(n_i) / total * dataset_entropy(row);
  }
  return dataset_entropy(s.counts()) - split;
}

inline SelectionResult select_top_coefficients(const LabeledDctSet& s, std::size_t d) {
  const std::size_t n = s.coefficient_count();
  if (d < 1 || d > n)
    throw ValidationError("select_top_coefficients: d=" + std::to_string(d) + " outside [1, " + std::to_string(n) + "]");
  std::vector<double> gain(n);
  for (std::size_t k = 0; k < n; ++k) gain[k] = information_gain(s, k);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });
  SelectionResult out;
  for (std::size_t j = 0; j < d; ++j) {
    out.indices.push_back(order[j]);
    out.gains.push_back(gain[order[j]]);
  }
  return out;
}

inline void to_json(nlohmann::json& j, const SelectionResult& r) {
  j = nlohmann::json{{"indices", r.indices}, {"gains", r.gains}};
}

inline void from_json(const nlohmann::json& j, SelectionResult& r) {
  j.at("indices").get_to(r.indices);
  j.at("gains").get_to(r.gains);
  if (r.indices.size() != r.gains.size() || r.indices.empty())
    throw ValidationError("selection: indices and gains must be nonempty and equal length");
}

}  // namespace lipread
