#pragma once

// Left-right triviseme HMMs: word-chain construction, Viterbi and forward
// scoring, embedded Baum-Welch re-estimation, N-best word recognition and
// accuracy reports.
//
// Each model has S emitting states plus a non-emitting entry (0) and exit
// (S + 1). Allowed transitions: 0 -> 1, s -> s, s -> s + 1. A word is the
// concatenation of its triviseme models; the exit of one model feeds the
// entry of the next. Decoding scores end in the last emitting state without
// the final exit transition; training likelihoods include it so that every
// model's exit probability is re-estimated.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lipread/error.hpp"
#include "lipread/lexicon.hpp"
#include "lipread/shapemodel.hpp"

namespace lipread {

struct Hmm {
  std::vector<ShapeGMM> states;  // emitting states 1..S
  std::vector<Vec> trans;        // (S + 2) x (S + 2)

  std::size_t num_states() const { return states.size(); }
  std::size_t dim() const { return states.empty() ? 0 : states.front().dim(); }

  double log_self(std::size_t s) const { return std::log(trans[s + 1][s + 1]); }
  double log_next(std::size_t s) const { return std::log(trans[s + 1][s + 2]); }
  double log_entry() const { return std::log(trans[0][1]); }

  void validate() const {
    const std::size_t S = states.size();
    if (S == 0) throw ValidationError("HMM has no emitting states");
    if (trans.size() != S + 2) throw ValidationError("HMM transition matrix has the wrong size");
    for (std::size_t i = 0; i < S + 2; ++i) {
      if (trans[i].size() != S + 2) throw ValidationError("HMM transition matrix is not square");
      double sum = 0;
      for (std::size_t j = 0; j < S + 2; ++j) {
        double a = trans[i][j];
        if (!(a >= 0) || !std::isfinite(a)) throw ValidationError("HMM transition probabilities must be finite and >= 0");
        bool allowed = (i == 0 && j == 1) || (i >= 1 && i <= S && (j == i || j == i + 1));
        if (!allowed && a != 0) throw ValidationError("HMM transition outside the left-right topology");
        sum += a;
      }
      if (i <= S && std::abs(sum - 1.0) > 1e-9) throw ValidationError("HMM transition row does not sum to 1");
    }
    for (const auto& g : states) {
      g.validate();
      if (g.dim() != dim()) throw ValidationError("HMM states have different dimensions");
    }
  }
};

inline Hmm make_left_right(std::size_t S, const ShapeGMM& emission, double self_loop) {
  Hmm h;
  h.states.assign(S, emission);
  h.trans.assign(S + 2, Vec(S + 2, 0.0));
  h.trans[0][1] = 1.0;
  for (std::size_t s = 1; s <= S; ++s) {
    h.trans[s][s] = self_loop;
    h.trans[s][s + 1] = 1.0 - self_loop;
  }
  return h;
}

// Triviseme models plus monophone (center-only) and sil models used as backoff.
struct ModelSet {
  std::size_t dim = 0;
  bool wrap_silence = false;  // frame each word with sil models
  std::map<std::string, Hmm> models;

  // Triviseme model if present, else the monophone of its center.
  const Hmm& resolve(const Triviseme& t) const {
    if (auto it = models.find(to_string(t)); it != models.end()) return it->second;
    if (auto it = models.find(std::string(to_string(t.center))); it != models.end()) return it->second;
    throw ValidationError("no model or monophone backoff for " + to_string(t));
  }

  const Hmm& silence() const {
    auto it = models.find("sil");
    if (it == models.end()) throw ValidationError("model set has no sil model");
    return it->second;
  }

  bool has_triviseme(const Triviseme& t) const { return models.count(to_string(t)) > 0; }

  std::vector<const Hmm*> word_chain(const VisemeSeq& vs) const {
    std::vector<const Hmm*> chain;
    if (wrap_silence) chain.push_back(&silence());
    for (const auto& t : expand_trivisemes(vs)) chain.push_back(&resolve(t));
    if (wrap_silence) chain.push_back(&silence());
    return chain;
  }

  void validate() const {
    for (const auto& [name, h] : models) {
      h.validate();
      if (h.dim() != dim) throw ValidationError("model '" + name + "' has the wrong dimension");
    }
  }
};

// ---------------------------------------------------------------------------
// Flattened chains

struct ChainState {
  const ShapeGMM* emission;
  double log_self;
  double log_next;  // into the next chain state; for the last state, the exit
  std::size_t model;  // position in the chain
  std::size_t local;  // emitting state within that model
};

struct Chain {
  double log_entry = 0;
  std::vector<ChainState> states;
};

inline Chain build_chain(const std::vector<const Hmm*>& models) {
  if (models.empty()) throw ValidationError("empty model chain");
  Chain c;
  c.log_entry = models.front()->log_entry();
  for (std::size_t m = 0; m < models.size(); ++m) {
    const Hmm& h = *models[m];
    const std::size_t S = h.num_states();
    for (std::size_t s = 0; s < S; ++s) {
      double next = h.log_next(s);
      if (s + 1 == S && m + 1 < models.size()) next += models[m + 1]->log_entry();
      c.states.push_back({&h.states[s], h.log_self(s), next, m, s});
    }
  }
  return c;
}

namespace hmm_detail {

// emit[t * N + j]
inline std::vector<double> emissions(const Chain& c, const std::vector<Vec>& obs) {
  const std::size_t N = c.states.size();
  std::vector<double> e(obs.size() * N);
  for (std::size_t t = 0; t < obs.size(); ++t)
    for (std::size_t j = 0; j < N; ++j) e[t * N + j] = c.states[j].emission->log_density(obs[t]);
  return e;
}

}  // namespace hmm_detail

struct DecodeResult {
  double log_likelihood = kNegInf;
  std::vector<std::size_t> path;  // chain state per frame
  bool feasible = false;
};

inline DecodeResult viterbi_decode(const Chain& c, const std::vector<Vec>& obs) {
  if (obs.empty()) throw ValidationError("viterbi_decode: no observations");
  const std::size_t N = c.states.size(), T = obs.size();
  DecodeResult r;
  if (T < N) return r;
  const auto e = hmm_detail::emissions(c, obs);
  std::vector<double> delta(T * N, kNegInf);
  std::vector<std::size_t> back(T * N, 0);
  delta[0] = c.log_entry + e[0];
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t j = 0; j < N; ++j) {
      double stay = delta[(t - 1) * N + j] + c.states[j].log_self;
      double move = j > 0 ? delta[(t - 1) * N + j - 1] + c.states[j - 1].log_next : kNegInf;
      bool from_prev = move > stay;
      double best = from_prev ? move : stay;
      if (best == kNegInf) continue;
      delta[t * N + j] = best + e[t * N + j];
      back[t * N + j] = from_prev ? j - 1 : j;
    }
  double final = delta[(T - 1) * N + N - 1];
  if (final == kNegInf) return r;
  r.log_likelihood = final;
  r.feasible = true;
  r.path.resize(T);
  std::size_t j = N - 1;
  for (std::size_t t = T; t-- > 0;) {
    r.path[t] = j;
    if (t > 0) j = back[t * N + j];
  }
  return r;
}

inline double forward_log_likelihood(const Chain& c, const std::vector<Vec>& obs, bool include_exit = false) {
  if (obs.empty()) throw ValidationError("forward: no observations");
  const std::size_t N = c.states.size(), T = obs.size();
  if (T < N) return kNegInf;
  const auto e = hmm_detail::emissions(c, obs);
  Vec alpha(N, kNegInf), next(N);
  alpha[0] = c.log_entry + e[0];
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t j = 0; j < N; ++j) {
      double v = alpha[j] + c.states[j].log_self;
      if (j > 0) v = log_add(v, alpha[j - 1] + c.states[j - 1].log_next);
      next[j] = v == kNegInf ? kNegInf : v + e[t * N + j];
    }
    std::swap(alpha, next);
  }
  return alpha[N - 1] + (include_exit ? c.states[N - 1].log_next : 0.0);
}

// ---------------------------------------------------------------------------
// Training

struct HmmTrainConfig {
  std::size_t states = 3;
  std::size_t mixtures = 1;
  int mono_iterations = 8;
  int tri_iterations = 8;
  double self_loop = 0.6;
  double sil_self_loop = 0.9;
  double var_floor_ratio = 1e-3;  // times the global per-dimension variance
  double var_floor_min = 1e-8;
  bool wrap_silence = false;
};

struct TrainingUtterance {
  std::vector<Vec> obs;
  std::string word;  // looked up in the lexicon
};

struct BaumWelchResult {
  ModelSet models;
  std::vector<double> log_likelihood;  // total, one entry per iteration (pre-update parameters)
  std::size_t skipped = 0;             // utterances shorter than their chain
};

namespace hmm_detail {

struct StateAcc {
  std::vector<double> occ;  // per mixture component
  std::vector<Vec> sum, sumsq;
  double self = 0, next = 0;
};

struct ModelAcc {
  std::vector<StateAcc> states;
};

inline ModelAcc make_acc(const Hmm& h) {
  ModelAcc a;
  for (const auto& g : h.states) {
    StateAcc s;
    s.occ.assign(g.size(), 0.0);
    s.sum.assign(g.size(), Vec(g.dim(), 0.0));
    s.sumsq.assign(g.size(), Vec(g.dim(), 0.0));
    a.states.push_back(std::move(s));
  }
  return a;
}

inline Vec global_variance(const std::vector<TrainingUtterance>& corpus, std::size_t dim, Vec* mean_out = nullptr) {
  Vec mean(dim, 0.0), var(dim, 0.0);
  double n = 0;
  for (const auto& u : corpus)
    for (const auto& x : u.obs) {
      n += 1;
      for (std::size_t d = 0; d < dim; ++d) mean[d] += x[d];
    }
  if (n == 0) throw ValidationError("training corpus has no frames");
  for (auto& m : mean) m /= n;
  for (const auto& u : corpus)
    for (const auto& x : u.obs)
      for (std::size_t d = 0; d < dim; ++d) var[d] += (x[d] - mean[d]) * (x[d] - mean[d]);
  for (auto& v : var) v /= n;
  if (mean_out) *mean_out = mean;
  return var;
}

}  // namespace hmm_detail

// One forward-backward pass over every utterance followed by the M-step.
// Returns the total training log-likelihood under the parameters on entry.
inline double reestimate(ModelSet& set, const std::vector<TrainingUtterance>& corpus, const VisemeLexicon& lexicon,
                         const Vec& var_floor, std::size_t* skipped = nullptr) {
  std::map<const Hmm*, hmm_detail::ModelAcc> acc;
  double total = 0;
  std::size_t skip = 0;
  for (const auto& u : corpus) {
    auto models = set.word_chain(lexicon.at(u.word));
    auto chain = build_chain(models);
    const std::size_t N = chain.states.size(), T = u.obs.size();
    if (T < N) {
      ++skip;
      continue;
    }
    const auto e = hmm_detail::emissions(chain, u.obs);
    std::vector<double> alpha(T * N, kNegInf), beta(T * N, kNegInf);
    alpha[0] = chain.log_entry + e[0];
    for (std::size_t t = 1; t < T; ++t)
      for (std::size_t j = 0; j < N; ++j) {
        double v = alpha[(t - 1) * N + j] + chain.states[j].log_self;
        if (j > 0) v = log_add(v, alpha[(t - 1) * N + j - 1] + chain.states[j - 1].log_next);
        alpha[t * N + j] = v == kNegInf ? kNegInf : v + e[t * N + j];
      }
    beta[(T - 1) * N + N - 1] = chain.states[N - 1].log_next;
    for (std::size_t t = T - 1; t-- > 0;)
      for (std::size_t j = 0; j < N; ++j) {
        double v = chain.states[j].log_self + e[(t + 1) * N + j] + beta[(t + 1) * N + j];
        if (j + 1 < N) v = log_add(v, chain.states[j].log_next + e[(t + 1) * N + j + 1] + beta[(t + 1) * N + j + 1]);
        beta[t * N + j] = v;
      }
    const double ll = alpha[(T - 1) * N + N - 1] + chain.states[N - 1].log_next;
    if (!std::isfinite(ll)) {
      ++skip;
      continue;
    }
    total += ll;

    for (const auto* h : models)
      if (!acc.count(h)) acc.emplace(h, hmm_detail::make_acc(*h));
    Vec lp;
    for (std::size_t j = 0; j < N; ++j) {
      const auto& cs = chain.states[j];
      auto& sa = acc.at(models[cs.model]).states[cs.local];
      const ShapeGMM& g = *cs.emission;
      for (std::size_t t = 0; t < T; ++t) {
        double lg = alpha[t * N + j] + beta[t * N + j] - ll;
        if (lg == kNegInf) continue;
        double gamma = std::exp(lg);
        const Vec& x = u.obs[t];
        // Split the occupancy across mixture components.
        lp.assign(g.size(), kNegInf);
        for (std::size_t m = 0; m < g.size(); ++m)
          if (g.weights[m] > 0) lp[m] = std::log(g.weights[m]) + g.components[m].log_density(x);
        double lse = log_sum_exp(lp);
        for (std::size_t m = 0; m < g.size(); ++m) {
          double w = gamma * std::exp(lp[m] - lse);
          if (w == 0) continue;
          sa.occ[m] += w;
          for (std::size_t d = 0; d < x.size(); ++d) {
            sa.sum[m][d] += w * x[d];
            sa.sumsq[m][d] += w * x[d] * x[d];
          }
        }
        if (t + 1 < T) {
          sa.self += std::exp(alpha[t * N + j] + cs.log_self + e[(t + 1) * N + j] + beta[(t + 1) * N + j] - ll);
          if (j + 1 < N)
            sa.next += std::exp(alpha[t * N + j] + cs.log_next + e[(t + 1) * N + j + 1] + beta[(t + 1) * N + j + 1] - ll);
        } else if (j == N - 1) {
          sa.next += gamma;  // utterance-final exit
        }
      }
    }
  }

  for (auto& [name, h] : set.models) {
    auto it = acc.find(&h);
    if (it == acc.end()) continue;
    const auto& ma = it->second;
    for (std::size_t s = 0; s < h.num_states(); ++s) {
      const auto& sa = ma.states[s];
      double occ_total = std::accumulate(sa.occ.begin(), sa.occ.end(), 0.0);
      if (occ_total <= 0) continue;
      auto& g = h.states[s];
      for (std::size_t m = 0; m < g.size(); ++m) {
        g.weights[m] = sa.occ[m] / occ_total;
        if (sa.occ[m] <= 0) continue;
        auto& c = g.components[m];
        for (std::size_t d = 0; d < c.dim(); ++d) {
          c.mean[d] = sa.sum[m][d] / sa.occ[m];
          double v = sa.sumsq[m][d] / sa.occ[m] - c.mean[d] * c.mean[d];
          c.variance[d] = std::max(v, var_floor[d]);
        }
      }
      double out = sa.self + sa.next;
      if (out > 0) {
        h.trans[s + 1][s + 1] = sa.self / out;
        h.trans[s + 1][s + 2] = sa.next / out;
      }
    }
  }
  if (skipped) *skipped = skip;
  return total;
}

// Flat start: every monophone (and sil) gets the global mean and variance.
inline ModelSet flat_start(const std::vector<TrainingUtterance>& corpus, const HmmTrainConfig& cfg) {
  if (corpus.empty()) throw ValidationError("training corpus is empty");
  const std::size_t dim = corpus.front().obs.empty() ? 0 : corpus.front().obs.front().size();
  if (dim == 0) throw ValidationError("training corpus has empty observations");
  for (const auto& u : corpus)
    for (const auto& x : u.obs)
      if (x.size() != dim) throw ValidationError("training observations have inconsistent dimensions");
  if (cfg.states < 1 || cfg.mixtures < 1) throw ValidationError("states and mixtures must be >= 1");
  Vec mean;
  Vec var = hmm_detail::global_variance(corpus, dim, &mean);
  for (std::size_t d = 0; d < dim; ++d) var[d] = std::max(var[d], cfg.var_floor_min);

  ShapeGMM g;
  const auto M = cfg.mixtures;
  for (std::size_t m = 0; m < M; ++m) {
    GaussianComponent c{mean, var};
    double offset = 0.2 * (static_cast<double>(m) - (M - 1) / 2.0);
    for (std::size_t d = 0; d < dim; ++d) c.mean[d] += offset * std::sqrt(var[d]);
    g.components.push_back(std::move(c));
    g.weights.push_back(1.0 / static_cast<double>(M));
  }
  ModelSet set;
  set.dim = dim;
  set.wrap_silence = cfg.wrap_silence;
  for (auto v : kSpokenVisemes) set.models.emplace(std::string(to_string(v)), make_left_right(cfg.states, g, cfg.self_loop));
  set.models.emplace("sil", make_left_right(1, g, cfg.sil_self_loop));
  return set;
}

inline Vec variance_floor(const std::vector<TrainingUtterance>& corpus, std::size_t dim, const HmmTrainConfig& cfg) {
  Vec v = hmm_detail::global_variance(corpus, dim);
  for (auto& x : v) x = std::max(cfg.var_floor_ratio * x, cfg.var_floor_min);
  return v;
}

// Embedded re-estimation of whatever models the set holds.
inline BaumWelchResult train_baum_welch(ModelSet models, const std::vector<TrainingUtterance>& corpus,
                                        const VisemeLexicon& lexicon, const HmmTrainConfig& cfg, int iterations) {
  if (corpus.empty()) throw ValidationError("training corpus is empty");
  for (const auto& u : corpus) {
    for (const auto& t : expand_trivisemes(lexicon.at(u.word))) models.resolve(t);
    for (const auto& x : u.obs)
      if (x.size() != models.dim) throw ValidationError("training observation dimension differs from the models");
  }
  const Vec floor = variance_floor(corpus, models.dim, cfg);
  BaumWelchResult r;
  for (int it = 0; it < iterations; ++it) r.log_likelihood.push_back(reestimate(models, corpus, lexicon, floor, &r.skipped));
  r.models = std::move(models);
  return r;
}

// Copies the center monophone into a model for every triviseme in the corpus.
inline void clone_trivisemes(ModelSet& set, const std::vector<TrainingUtterance>& corpus, const VisemeLexicon& lexicon) {
  for (const auto& u : corpus)
    for (const auto& t : expand_trivisemes(lexicon.at(u.word))) {
      auto name = to_string(t);
      if (!set.models.count(name)) {
        Hmm copy = set.models.at(std::string(to_string(t.center)));
        set.models.emplace(name, std::move(copy));
      }
    }
}

struct TrainingReport {
  ModelSet models;
  std::vector<double> mono_log_likelihood;
  std::vector<double> tri_log_likelihood;
};

// Flat start -> monophone re-estimation -> triviseme cloning -> triviseme
// re-estimation. Monophones stay in the set as backoff for unseen contexts.
inline TrainingReport train_models(const std::vector<TrainingUtterance>& corpus, const VisemeLexicon& lexicon,
                                   const HmmTrainConfig& cfg = {}) {
  TrainingReport rep;
  auto mono = train_baum_welch(flat_start(corpus, cfg), corpus, lexicon, cfg, cfg.mono_iterations);
  rep.mono_log_likelihood = mono.log_likelihood;
  ModelSet set = std::move(mono.models);
  clone_trivisemes(set, corpus, lexicon);
  auto tri = train_baum_welch(std::move(set), corpus, lexicon, cfg, cfg.tri_iterations);
  rep.tri_log_likelihood = tri.log_likelihood;
  rep.models = std::move(tri.models);
  return rep;
}

// ---------------------------------------------------------------------------
// Recognition

struct RecognitionResult {
  std::vector<std::pair<std::string, double>> ranked;  // descending score
  std::size_t n_best = 3;
  bool all_infeasible = false;
};

inline RecognitionResult recognize_nbest(const std::vector<Vec>& obs, const VisemeLexicon& lexicon, const ModelSet& models,
                                         std::size_t n = 3) {
  if (lexicon.empty()) throw ValidationError("lexicon is empty");
  if (n < 1) throw ValidationError("n-best count must be >= 1");
  RecognitionResult r;
  r.n_best = n;
  for (const auto& [word, vs] : lexicon) {  // lexicographic order
    auto d = viterbi_decode(build_chain(models.word_chain(vs)), obs);
    if (d.feasible) r.ranked.emplace_back(word, d.log_likelihood);
  }
  r.all_infeasible = r.ranked.empty();
  std::stable_sort(r.ranked.begin(), r.ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (r.ranked.size() > n) r.ranked.resize(n);
  return r;
}

// ---------------------------------------------------------------------------
// Evaluation

struct EvalItem {
  std::vector<Vec> obs;
  std::string truth;
  std::vector<std::string> tags;  // e.g. "training-word", "speaker:s2"
};

struct SplitScore {
  std::size_t count = 0;
  std::size_t hits = 0;       // truth within the top n
  std::size_t top1_hits = 0;

  double accuracy() const { return count ? 100.0 * static_cast<double>(hits) / static_cast<double>(count) : 0.0; }
  double top1_accuracy() const {
    return count ? 100.0 * static_cast<double>(top1_hits) / static_cast<double>(count) : 0.0;
  }
};

struct EvalReport {
  std::size_t n_best = 3;
  SplitScore overall;
  std::map<std::string, SplitScore> splits;
  struct Item {
    std::string truth;
    std::vector<std::string> tags;
    RecognitionResult result;
    bool hit = false;
  };
  std::vector<Item> items;
};

inline EvalReport evaluate_accuracy(const std::vector<EvalItem>& corpus, const VisemeLexicon& lexicon,
                                    const ModelSet& models, std::size_t n = 3) {
  if (corpus.empty()) throw ValidationError("evaluation corpus is empty");
  EvalReport rep;
  rep.n_best = n;
  for (const auto& item : corpus) {
    if (item.truth.empty()) throw ValidationError("evaluation item without a label");
    auto res = recognize_nbest(item.obs, lexicon, models, n);
    bool hit = std::any_of(res.ranked.begin(), res.ranked.end(), [&](const auto& p) { return p.first == item.truth; });
    bool top1 = !res.ranked.empty() && res.ranked.front().first == item.truth;
    auto tally = [&](SplitScore& s) {
      ++s.count;
      s.hits += hit;
      s.top1_hits += top1;
    };
    tally(rep.overall);
    for (const auto& tag : item.tags) tally(rep.splits[tag]);
    rep.items.push_back({item.truth, item.tags, std::move(res), hit});
  }
  return rep;
}

inline nlohmann::json split_json(const SplitScore& s) {
  return {{"count", s.count},
          {"hits", s.hits},
          {"accuracy", s.accuracy()},
          {"top1_hits", s.top1_hits},
          {"top1_accuracy", s.top1_accuracy()}};
}

inline nlohmann::json recognition_json(const RecognitionResult& r) {
  nlohmann::json ranked = nlohmann::json::array();
  for (const auto& [w, s] : r.ranked) ranked.push_back({{"word", w}, {"score", s}});
  return ranked;
}

inline void to_json(nlohmann::json& j, const EvalReport& r) {
  nlohmann::json splits = nlohmann::json::object();
  for (const auto& [tag, s] : r.splits) splits[tag] = split_json(s);
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : r.items)
    items.push_back({{"truth", it.truth}, {"tags", it.tags}, {"hit", it.hit}, {"ranked", recognition_json(it.result)}});
  j = nlohmann::json{{"n_best", r.n_best}, {"overall", split_json(r.overall)}, {"splits", splits}, {"items", items}};
}

inline std::string format_report_table(const EvalReport& r) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "split" << std::right << std::setw(8) << "count" << std::setw(12) << "top-1 %"
      << std::setw(12) << ("top-" + std::to_string(r.n_best) + " %") << "\n";
  auto row = [&](const std::string& name, const SplitScore& s) {
    out << std::left << std::setw(24) << name << std::right << std::setw(8) << s.count << std::fixed
        << std::setprecision(1) << std::setw(12) << s.top1_accuracy() << std::setw(12) << s.accuracy() << "\n";
  };
  row("overall", r.overall);
  for (const auto& [tag, s] : r.splits) row(tag, s);
  return out.str();
}

// ---------------------------------------------------------------------------
// Model-set JSON

inline void to_json(nlohmann::json& j, const Hmm& h) {
  nlohmann::json states = nlohmann::json::array();
  for (const auto& g : h.states) {
    nlohmann::json means = nlohmann::json::array(), vars = nlohmann::json::array();
    for (const auto& c : g.components) {
      means.push_back(c.mean);
      vars.push_back(c.variance);
    }
    states.push_back({{"weights", g.weights}, {"means", means}, {"variances", vars}});
  }
  j = nlohmann::json{{"transitions", h.trans}, {"states", states}};
}

inline void from_json(const nlohmann::json& j, Hmm& h) {
  h = {};
  j.at("transitions").get_to(h.trans);
  for (const auto& s : j.at("states")) {
    ShapeGMM g;
    s.at("weights").get_to(g.weights);
    const auto& means = s.at("means");
    const auto& vars = s.at("variances");
    if (means.size() != vars.size()) throw ValidationError("HMM state: means/variances count differs");
    for (std::size_t k = 0; k < means.size(); ++k) g.components.push_back({means[k].get<Vec>(), vars[k].get<Vec>()});
    h.states.push_back(std::move(g));
  }
}

inline void to_json(nlohmann::json& j, const ModelSet& m) {
  j = nlohmann::json{{"dim", m.dim}, {"wrap_silence", m.wrap_silence}, {"models", m.models}};
}

inline void from_json(const nlohmann::json& j, ModelSet& m) {
  m = {};
  j.at("dim").get_to(m.dim);
  m.wrap_silence = j.value("wrap_silence", false);
  for (const auto& [name, h] : j.at("models").items()) {
    if (name != "sil" && name.find('-') != std::string::npos) parse_triviseme(name);
    else parse_viseme(name);
    m.models.emplace(name, h.get<Hmm>());
  }
  m.validate();
}

}  // namespace lipread
