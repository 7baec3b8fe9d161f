#pragma once

// Per-shape diagonal GMMs, EM training, cross-shape calibration and the
// 8-d region feature.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include <json.hpp>

#include "lipread/corpus.hpp"
#include "lipread/error.hpp"
#include "lipread/igselect.hpp"
#include "lipread/transform.hpp"

namespace lipread {

using Vec = std::vector<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLog2Pi = 1.8378770664093454836;

inline double log_sum_exp(std::span<const double> xs) {
  double hi = kNegInf;
  for (double v : xs) hi = std::max(hi, v);
  if (hi == kNegInf) return kNegInf;
  double acc = 0;
  for (double v : xs) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

struct GaussianComponent {
  Vec mean;
  Vec variance;

  std::size_t dim() const { return mean.size(); }

  double log_density(std::span<const double> x) const {
    double acc = 0;
    for (std::size_t d = 0; d < mean.size(); ++d) {
      double diff = x[d] - mean[d];
      acc += kLog2Pi + std::log(variance[d]) + diff * diff / variance[d];
    }
    return -0.5 * acc;
  }
};

struct ShapeGMM {
  Vec weights;
  std::vector<GaussianComponent> components;

  std::size_t dim() const { return components.empty() ? 0 : components.front().dim(); }
  std::size_t size() const { return components.size(); }

  void validate() const {
    if (components.empty() || components.size() != weights.size())
      throw ValidationError("GMM: components and weights must be nonempty and equal length");
    double sum = 0;
    for (double w : weights) {
      if (!(w >= 0)) throw ValidationError("GMM: negative mixture weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("GMM: mixture weights do not sum to 1");
    for (const auto& c : components) {
      if (c.mean.size() != dim() || c.variance.size() != dim())
        throw ValidationError("GMM: inconsistent component dimensions");
      for (double v : c.variance)
        if (!(v > 0)) throw ValidationError("GMM: variances must be positive");
    }
  }

  double log_density(std::span<const double> x) const {
    if (x.size() != dim())
      throw ValidationError("GMM: dimension mismatch (" + std::to_string(x.size()) + " vs " + std::to_string(dim()) + ")");
    double acc = kNegInf;
    for (std::size_t k = 0; k < components.size(); ++k)
      if (weights[k] > 0) acc = log_add(acc, std::log(weights[k]) + components[k].log_density(x));
    return acc;
  }
};

inline double gmm_density(const ShapeGMM& g, std::span<const double> x) { return std::exp(g.log_density(x)); }

struct EmConfig {
  double tol = 1e-6;  // relative log-likelihood improvement
  int max_iter = 200;
  double var_floor_ratio = 1e-6;  // times the global per-dimension variance
  double var_floor_min = 1e-10;
  std::uint64_t seed = 1;
};

struct EmResult {
  ShapeGMM gmm;
  std::vector<double> log_likelihood;  // one entry per parameter set visited
  int iterations = 0;
};

inline EmResult fit_shape_gmm(const std::vector<Vec>& data, std::size_t K, const EmConfig& cfg = {}) {
  if (K < 1) throw ValidationError("GMM: K must be >= 1");
  if (data.size() < K)
    throw ValidationError("GMM: " + std::to_string(data.size()) + " samples cannot support " + std::to_string(K) +
                          " components");
  const std::size_t D = data.front().size();
  if (D == 0) throw ValidationError("GMM: zero-dimensional data");
  for (const auto& x : data)
    if (x.size() != D) throw ValidationError("GMM: inconsistent sample dimensions");
  const std::size_t N = data.size();

  Vec gmean(D, 0.0), gvar(D, 0.0);
  for (const auto& x : data)
    for (std::size_t d = 0; d < D; ++d) gmean[d] += x[d];
  for (auto& m : gmean) m /= static_cast<double>(N);
  for (const auto& x : data)
    for (std::size_t d = 0; d < D; ++d) gvar[d] += (x[d] - gmean[d]) * (x[d] - gmean[d]);
  Vec floor(D);
  for (std::size_t d = 0; d < D; ++d) {
    gvar[d] /= static_cast<double>(N);
    floor[d] = std::max(cfg.var_floor_ratio * gvar[d], cfg.var_floor_min);
  }

  // Seeding: a random first centre, then repeatedly the point farthest from
  // the chosen centres.
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> seeds{std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)};
  Vec mind(N, std::numeric_limits<double>::infinity());
  while (seeds.size() < K) {
    const auto& c = data[seeds.back()];
    std::size_t far = 0;
    for (std::size_t n = 0; n < N; ++n) {
      double dist = 0;
      for (std::size_t d = 0; d < D; ++d) dist += (data[n][d] - c[d]) * (data[n][d] - c[d]);
      mind[n] = std::min(mind[n], dist);
      if (mind[n] > mind[far]) far = n;
    }
    seeds.push_back(far);
  }

  ShapeGMM g;
  g.weights.assign(K, 1.0 / static_cast<double>(K));
  for (auto s : seeds) {
    GaussianComponent c{data[s], gvar};
    for (std::size_t d = 0; d < D; ++d) c.variance[d] = std::max(c.variance[d], floor[d]);
    g.components.push_back(std::move(c));
  }

  std::vector<double> resp(N * K);
  auto e_step = [&] {
    double ll = 0;
    Vec lp(K);
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t k = 0; k < K; ++k)
        lp[k] = g.weights[k] > 0 ? std::log(g.weights[k]) + g.components[k].log_density(data[n]) : kNegInf;
      double lse = log_sum_exp(lp);
      ll += lse;
      for (std::size_t k = 0; k < K; ++k) resp[n * K + k] = std::exp(lp[k] - lse);
    }
    return ll;
  };
  auto m_step = [&] {
    for (std::size_t k = 0; k < K; ++k) {
      double nk = 0;
      for (std::size_t n = 0; n < N; ++n) nk += resp[n * K + k];
      g.weights[k] = nk / static_cast<double>(N);
      if (nk <= 0) continue;  // dead component keeps its parameters at zero weight
      auto& c = g.components[k];
      std::fill(c.mean.begin(), c.mean.end(), 0.0);
      for (std::size_t n = 0; n < N; ++n)
        for (std::size_t d = 0; d < D; ++d) c.mean[d] += resp[n * K + k] * data[n][d];
      for (auto& m : c.mean) m /= nk;
      std::fill(c.variance.begin(), c.variance.end(), 0.0);
      for (std::size_t n = 0; n < N; ++n)
        for (std::size_t d = 0; d < D; ++d) {
          double diff = data[n][d] - c.mean[d];
          c.variance[d] += resp[n * K + k] * diff * diff;
        }
      for (std::size_t d = 0; d < D; ++d) c.variance[d] = std::max(c.variance[d] / nk, floor[d]);
    }
    double wsum = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
    for (auto& w : g.weights) w /= wsum;
  };

  EmResult out;
  out.log_likelihood.push_back(e_step());
  for (int it = 0; it < cfg.max_iter; ++it) {
    m_step();
    double ll = e_step();
    double prev = out.log_likelihood.back();
    out.log_likelihood.push_back(ll);
    ++out.iterations;
    if (std::abs(ll - prev) <= cfg.tol * std::max(std::abs(prev), 1e-300)) break;
  }
  out.gmm = std::move(g);
  return out;
}

inline ShapeGMM train_shape_gmm(const std::vector<Vec>& data, std::size_t K, const EmConfig& cfg = {}) {
  return fit_shape_gmm(data, K, cfg).gmm;
}

// ---------------------------------------------------------------------------
// Calibration

struct CalibratedShapeModel {
  std::vector<ShapeGMM> gmms;
  std::vector<Vec> alpha;  // alpha[i][k], rows on the simplex
  Vec log_mean_prob;       // log of the per-shape mean calibrated probability
  SelectionResult selection;
  std::size_t closed_index = shape_index(LipShape::closed);
  int patch_w = 0;
  int patch_h = 0;

  std::size_t shape_count() const { return gmms.size(); }
  std::size_t dim() const { return gmms.empty() ? 0 : gmms.front().dim(); }

  Vec mean_prob() const {
    Vec out(log_mean_prob.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(log_mean_prob[i]);
    return out;
  }

  // log Pr_i(x) for every shape i.
  Vec log_calibrated(std::span<const double> x) const {
    const std::size_t S = gmms.size();
    Vec lp(S);
    for (std::size_t k = 0; k < S; ++k) lp[k] = gmms[k].log_density(x);
    Vec out(S);
    Vec terms(S);
    for (std::size_t i = 0; i < S; ++i) {
      for (std::size_t k = 0; k < S; ++k) terms[k] = alpha[i][k] > 0 ? std::log(alpha[i][k]) + lp[k] : kNegInf;
      out[i] = log_sum_exp(terms);
    }
    return out;
  }

  void validate() const {
    const std::size_t S = gmms.size();
    if (S < 2) throw ValidationError("shape model needs at least two shapes");
    for (const auto& g : gmms) {
      g.validate();
      if (g.dim() != dim()) throw ValidationError("shape model: GMM dimensions differ");
    }
    if (alpha.size() != S || log_mean_prob.size() != S) throw ValidationError("shape model: alpha/mean_prob size");
    for (const auto& row : alpha) {
      if (row.size() != S) throw ValidationError("shape model: alpha must be square");
      double sum = 0;
      for (double a : row) {
        if (!(a >= 0)) throw ValidationError("shape model: negative alpha");
        sum += a;
      }
      if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("shape model: alpha row does not sum to 1");
    }
    if (closed_index >= S) throw ValidationError("shape model: closed_index out of range");
    if (selection.size() != dim()) throw ValidationError("shape model: selection length differs from GMM dimension");
  }
};

inline CalibratedShapeModel calibrate_models(std::vector<ShapeGMM> gmms, const std::vector<std::vector<Vec>>& train) {
  const std::size_t S = gmms.size();
  if (train.size() != S) throw ValidationError("calibrate_models: need one training set per shape");
  CalibratedShapeModel m;
  m.gmms = std::move(gmms);
  m.alpha.assign(S, Vec(S, 0.0));
  m.log_mean_prob.assign(S, 0.0);
  Vec lp(S);
  for (std::size_t i = 0; i < S; ++i) {
    if (train[i].empty()) throw ValidationError("calibrate_models: training set " + std::to_string(i) + " is empty");
    for (std::size_t n = 0; n < train[i].size(); ++n) {
      for (std::size_t k = 0; k < S; ++k) lp[k] = m.gmms[k].log_density(train[i][n]);
      double lse = log_sum_exp(lp);
      if (!std::isfinite(lse))
        throw ValidationError("calibrate_models: all shape densities vanish for sample " + std::to_string(n) +
                              " of shape " + std::to_string(i));
      for (std::size_t k = 0; k < S; ++k) m.alpha[i][k] += std::exp(lp[k] - lse);
    }
    for (auto& a : m.alpha[i]) a /= static_cast<double>(train[i].size());
  }
  for (std::size_t i = 0; i < S; ++i) {
    Vec lpr(train[i].size());
    for (std::size_t n = 0; n < train[i].size(); ++n) lpr[n] = m.log_calibrated(train[i][n])[i];
    m.log_mean_prob[i] = log_sum_exp(lpr) - std::log(static_cast<double>(train[i].size()));
  }
  return m;
}

// Component i: Pr_i(x) / mean Pr_i over the training set of shape i. Values
// are clamped into the positive normal double range.
inline Vec region_feature(const CalibratedShapeModel& m, std::span<const double> x) {
  if (x.size() != m.dim())
    throw ValidationError("region_feature: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                          std::to_string(m.dim()) + ")");
  auto lpr = m.log_calibrated(x);
  Vec out(lpr.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::clamp(std::exp(lpr[i] - m.log_mean_prob[i]), std::numeric_limits<double>::min(),
                        std::numeric_limits<double>::max());
  return out;
}

// The GMM input for a patch: selected DCT coefficients times their gains.
inline Vec shape_input(const CalibratedShapeModel& m, const GrayImage& patch) {
  if (m.patch_w && (patch.width != m.patch_w || patch.height != m.patch_h))
    throw ValidationError("patch is " + std::to_string(patch.width) + "x" + std::to_string(patch.height) +
                          ", model expects " + std::to_string(m.patch_w) + "x" + std::to_string(m.patch_h));
  return select_coefficients(dct2(patch), m.selection.indices, m.selection.gains);
}

inline Vec region_feature(const CalibratedShapeModel& m, const GrayImage& patch) {
  return region_feature(m, shape_input(m, patch));
}

// ---------------------------------------------------------------------------
// End-to-end training from shape-annotated frames

struct ShapeModelConfig {
  std::size_t d = 40;
  std::size_t K = 3;
  EmConfig em;
};

inline LabeledDctSet labeled_dct_set(const std::vector<const Frame*>& frames) {
  LabeledDctSet set;
  for (const Frame* f : frames) {
    if (!f->shape) continue;
    if (!f->patch) throw ValidationError("frame " + std::to_string(f->index) + " has a shape label but no patch");
    set.add(dct2(*f->patch), shape_index(*f->shape));
  }
  if (set.size() == 0) throw ValidationError("no shape-annotated frames with patches");
  return set;
}

inline LabeledDctSet labeled_dct_set(const std::vector<FrameSequence>& seqs) {
  std::vector<const Frame*> frames;
  for (const auto& s : seqs)
    for (const auto& f : s.frames) frames.push_back(&f);
  return labeled_dct_set(frames);
}

inline CalibratedShapeModel train_shape_model(const LabeledDctSet& set, const SelectionResult& sel,
                                              const ShapeModelConfig& cfg) {
  std::vector<std::vector<Vec>> per_shape(set.num_classes);
  for (std::size_t t = 0; t < set.size(); ++t)
    per_shape[set.labels[t]].push_back(select_coefficients(set.samples[t], sel.indices, sel.gains));
  std::vector<ShapeGMM> gmms;
  for (std::size_t i = 0; i < set.num_classes; ++i) {
    if (per_shape[i].empty()) throw ValidationError("no training samples for shape " + std::to_string(i));
    EmConfig em = cfg.em;
    em.seed = cfg.em.seed + i;
    gmms.push_back(train_shape_gmm(per_shape[i], cfg.K, em));
  }
  auto m = calibrate_models(std::move(gmms), per_shape);
  m.selection = sel;
  m.patch_w = set.samples.front().width;
  m.patch_h = set.samples.front().height;
  return m;
}

inline CalibratedShapeModel train_shape_model(const LabeledDctSet& set, const ShapeModelConfig& cfg) {
  return train_shape_model(set, select_top_coefficients(set, cfg.d), cfg);
}

// ---------------------------------------------------------------------------
// JSON

inline void to_json(nlohmann::json& j, const CalibratedShapeModel& m) {
  nlohmann::json shapes = nlohmann::json::array();
  for (const auto& g : m.gmms) {
    nlohmann::json means = nlohmann::json::array(), vars = nlohmann::json::array();
    for (const auto& c : g.components) {
      means.push_back(c.mean);
      vars.push_back(c.variance);
    }
    shapes.push_back({{"weights", g.weights}, {"means", means}, {"variances", vars}});
  }
  j = nlohmann::json{{"selection", m.selection},      {"shapes", shapes},
                     {"alpha", m.alpha},              {"mean_prob", m.mean_prob()},
                     {"log_mean_prob", m.log_mean_prob}, {"closed_index", m.closed_index},
                     {"patch_w", m.patch_w},          {"patch_h", m.patch_h}};
}

inline void from_json(const nlohmann::json& j, CalibratedShapeModel& m) {
  m = {};
  j.at("selection").get_to(m.selection);
  for (const auto& s : j.at("shapes")) {
    ShapeGMM g;
    s.at("weights").get_to(g.weights);
    const auto& means = s.at("means");
    const auto& vars = s.at("variances");
    if (means.size() != vars.size()) throw ValidationError("shape model: means/variances count differs");
    for (std::size_t k = 0; k < means.size(); ++k)
      g.components.push_back({means[k].get<Vec>(), vars[k].get<Vec>()});
    m.gmms.push_back(std::move(g));
  }
  j.at("alpha").get_to(m.alpha);
  if (j.contains("log_mean_prob")) {
    j.at("log_mean_prob").get_to(m.log_mean_prob);
  } else {
    for (double p : j.at("mean_prob").get<Vec>()) m.log_mean_prob.push_back(std::log(p));
  }
  j.at("closed_index").get_to(m.closed_index);
  m.patch_w = j.value("patch_w", 0);
  m.patch_h = j.value("patch_h", 0);
  m.validate();
}

}  // namespace lipread
