#pragma once

// Command-line front end. dispatch() is the whole program; tools/lipread.cpp
// only forwards argv.
//
// Exit codes: 0 success, 1 usage or validation error, 2 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lipread/lipread.hpp"

namespace lipread {

// Every knob the pipeline leaves open, in one place.
struct PipelineConfig {
  std::size_t d = 40;
  std::size_t K = 3;
  int W = 4;
  double s_rgn = 1.0;
  double s_cont = 1.0;
  std::size_t hmm_states = 3;
  std::size_t mixtures = 1;
  int mono_iterations = 8;
  int tri_iterations = 8;
  double hmm_var_floor = 1e-3;
  bool wrap_silence = false;
  bool labial_codas = false;
  std::size_t n_best = 3;
  std::uint64_t seed = 1;
  std::string lexicon;
  std::string extension_map;

  void validate() const {
    if (d < 1 || K < 1 || hmm_states < 1 || mixtures < 1 || n_best < 1)
      throw ValidationError("counts (d, K, hmm_states, mixtures, n_best) must be >= 1");
    if (W < 0 || W % 2 != 0) throw ValidationError("W must be even and >= 0");
    if (!(s_rgn > 0) || !(s_cont > 0)) throw ValidationError("s_rgn and s_cont must be > 0");
    if (mono_iterations < 0 || tri_iterations < 0) throw ValidationError("iteration counts must be >= 0");
  }

  PipeConfig pipe() const {
    PipeConfig p;
    p.W = W;
    p.s_rgn = s_rgn;
    p.s_cont = s_cont;
    return p;
  }

  HmmTrainConfig hmm() const {
    HmmTrainConfig h;
    h.states = hmm_states;
    h.mixtures = mixtures;
    h.mono_iterations = mono_iterations;
    h.tri_iterations = tri_iterations;
    h.var_floor_ratio = hmm_var_floor;
    h.wrap_silence = wrap_silence;
    return h;
  }

  std::string to_text() const {
    std::ostringstream o;
    o << "d = " << d << "\nK = " << K << "\nW = " << W << "\ns_rgn = " << s_rgn << "\ns_cont = " << s_cont
      << "\nhmm_states = " << hmm_states << "\nmixtures = " << mixtures << "\nmono_iterations = " << mono_iterations
      << "\ntri_iterations = " << tri_iterations << "\nhmm_var_floor = " << hmm_var_floor
      << "\nwrap_silence = " << (wrap_silence ? "true" : "false") << "\nlabial_codas = " << (labial_codas ? "true" : "false")
      << "\nn_best = " << n_best << "\nseed = " << seed << "\nlexicon = " << lexicon
      << "\nextension_map = " << extension_map << "\n";
    return o.str();
  }
};

inline PipelineConfig pipeline_config_from(const std::map<std::string, std::string>& kv, PipelineConfig c = {}) {
  auto flag = [](const std::string& v) { return v == "1" || v == "true" || v == "yes"; };
  for (const auto& [key, v] : kv) {
    try {
      if (key == "d") c.d = std::stoul(v);
      else if (key == "K") c.K = std::stoul(v);
      else if (key == "W") c.W = std::stoi(v);
      else if (key == "s_rgn") c.s_rgn = std::stod(v);
      else if (key == "s_cont") c.s_cont = std::stod(v);
      else if (key == "hmm_states") c.hmm_states = std::stoul(v);
      else if (key == "mixtures") c.mixtures = std::stoul(v);
      else if (key == "mono_iterations") c.mono_iterations = std::stoi(v);
      else if (key == "tri_iterations") c.tri_iterations = std::stoi(v);
      else if (key == "hmm_var_floor") c.hmm_var_floor = std::stod(v);
      else if (key == "wrap_silence") c.wrap_silence = flag(v);
      else if (key == "labial_codas") c.labial_codas = flag(v);
      else if (key == "n_best") c.n_best = std::stoul(v);
      else if (key == "seed") c.seed = std::stoull(v);
      else if (key == "lexicon") c.lexicon = v;
      else if (key == "extension_map") c.extension_map = v;
      else throw ValidationError("unknown config key '" + key + "'");
    } catch (const std::logic_error&) {
      throw ValidationError("bad value for '" + key + "': '" + v + "'");
    }
  }
  return c;
}

namespace cli_detail {

inline nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

template <typename T>
T read_json_as(const std::string& path) {
  auto j = read_json(path);
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + path + "': " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::vector<FrameSequence> load_all(const std::vector<std::string>& paths) {
  std::vector<FrameSequence> out;
  for (const auto& p : paths) out.push_back(load_sequence(p));
  return out;
}

struct ListEntry {
  std::string features;
  std::string word;
  std::vector<std::string> tags;
};

// path<TAB>word[<TAB>tag,tag,...]; paths relative to the list file.
inline std::vector<ListEntry> load_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open list '" + path + "'");
  auto base = std::filesystem::path(path).parent_path();
  std::vector<ListEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) cols.push_back(cell);
    if (cols.size() < 2) throw ParseError("expected features<TAB>word[<TAB>tags]", lineno);
    ListEntry e{(base / cols[0]).string(), cols[1], {}};
    if (cols.size() > 2) {
      std::stringstream ts(cols[2]);
      while (std::getline(ts, cell, ','))
        if (!cell.empty()) e.tags.push_back(cell);
    }
    out.push_back(std::move(e));
  }
  if (out.empty()) throw ValidationError("list '" + path + "' is empty");
  return out;
}

inline VisemeLexicon lexicon_from(const PipelineConfig& cfg) {
  if (cfg.lexicon.empty()) throw ValidationError("--lexicon is required");
  ExtensionMap ext = default_extension_map();
  if (!cfg.extension_map.empty()) ext = load_extension_map(cfg.extension_map, ext);
  HangulOptions opts;
  opts.labial_codas = cfg.labial_codas;
  return load_lexicon(cfg.lexicon, ext, opts);
}

}  // namespace cli_detail

inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace cli_detail;
  PipelineConfig cfg;

  // The config file is applied before flags so that flags win.
  for (int a = 1; a + 1 < argc; ++a)
    if (std::string(argv[a]) == "--config") {
      try {
        std::ifstream in(argv[a + 1]);
        if (!in) {
          err << "error: cannot open config '" << argv[a + 1] << "'\n";
          return 2;
        }
        cfg = pipeline_config_from(parse_key_values(in));
      } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
      }
    }

  CLI::App app{"Korean lip-reading toolkit: viseme features and triviseme HMM word recognition", "lipread"};
  app.require_subcommand(0, 1);
  std::string config_path;
  bool show_config = false;
  app.add_option("--config", config_path, "key = value pipeline configuration (flags override it)");
  app.add_flag("--show-config", show_config, "print the effective configuration and exit");
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "synthesize a landmark/patch sequence or labeled training stills");
  std::string script, word, synth_cfg_path, synth_out;
  int stills = 0;
  std::optional<double> noise;
  std::optional<int> fpv;
  std::optional<std::string> speaker;
  std::optional<double> mouth_scale;
  auto* script_opt = synth->add_option("--script", script, "space-separated viseme symbols, e.g. \"m o a o\"");
  auto* word_opt = synth->add_option("--word", word, "Hangul word converted to visemes");
  auto* stills_opt = synth->add_option("--stills", stills, "emit N annotated stills per basic lip shape");
  script_opt->excludes(word_opt)->excludes(stills_opt);
  word_opt->excludes(stills_opt);
  synth->add_option("--synth-config", synth_cfg_path, "SynthConfig key = value file");
  synth->add_option("--noise", noise, "landmark noise sigma (pixels)");
  synth->add_option("--frames-per-viseme", fpv);
  synth->add_option("--speaker", speaker);
  synth->add_option("--mouth-scale", mouth_scale);
  synth->add_option("--lexicon", cfg.lexicon, "lexicon used to look up --word");
  synth->add_option("--out", synth_out, "output JSONL (patches written alongside)")->required();

  // train-select
  auto* tsel = app.add_subcommand("train-select", "rank DCT coefficients by information gain");
  std::vector<std::string> tsel_in;
  std::string tsel_out, spectrum_out;
  tsel->add_option("--in", tsel_in, "shape-annotated still sequences")->required();
  tsel->add_option("--d", cfg.d, "number of coefficients kept")->capture_default_str();
  tsel->add_option("--out", tsel_out, "selection JSON")->required();
  tsel->add_option("--spectrum", spectrum_out, "CSV of the gain of every coefficient");

  // train-gmm
  auto* tgmm = app.add_subcommand("train-gmm", "train per-shape GMMs and calibrate them");
  std::vector<std::string> tgmm_in;
  std::string tgmm_sel, tgmm_out;
  tgmm->add_option("--in", tgmm_in, "shape-annotated still sequences")->required();
  tgmm->add_option("--selection", tgmm_sel, "selection JSON from train-select (computed if omitted)");
  tgmm->add_option("--d", cfg.d)->capture_default_str();
  tgmm->add_option("--K", cfg.K, "Gaussian components per shape")->capture_default_str();
  tgmm->add_option("--out", tgmm_out, "shape model JSON")->required();

  // train-gamma
  auto* tgam = app.add_subcommand("train-gamma", "estimate closed-lip ratio tables per speaker");
  std::vector<std::string> tgam_in;
  std::string tgam_out;
  tgam->add_option("--in", tgam_in, "shape-annotated still sequences")->required();
  tgam->add_option("--out", tgam_out, "gamma JSON")->required();

  // extract
  auto* ext = app.add_subcommand("extract", "compute 26-d observation vectors for a sequence");
  std::string ext_model, ext_gamma, ext_in, ext_out;
  ext->add_option("--model", ext_model, "shape model JSON")->required();
  ext->add_option("--gamma", ext_gamma, "gamma JSON")->required();
  ext->add_option("--in", ext_in, "landmark JSONL")->required();
  ext->add_option("--out", ext_out, "feature CSV")->required();
  ext->add_option("--W", cfg.W, "smoothing window (even)")->capture_default_str();
  ext->add_option("--s-rgn", cfg.s_rgn)->capture_default_str();
  ext->add_option("--s-cont", cfg.s_cont)->capture_default_str();

  // train-hmm
  auto* thmm = app.add_subcommand("train-hmm", "train triviseme HMMs by embedded Baum-Welch");
  std::string thmm_list, thmm_out, thmm_log;
  thmm->add_option("--list", thmm_list, "TSV: features.csv<TAB>word")->required();
  thmm->add_option("--lexicon", cfg.lexicon, "lexicon TSV");
  thmm->add_option("--ext", cfg.extension_map, "vowel extension map TSV");
  thmm->add_option("--states", cfg.hmm_states)->capture_default_str();
  thmm->add_option("--mixtures", cfg.mixtures)->capture_default_str();
  thmm->add_option("--mono-iterations", cfg.mono_iterations)->capture_default_str();
  thmm->add_option("--tri-iterations", cfg.tri_iterations)->capture_default_str();
  thmm->add_flag("--wrap-silence", cfg.wrap_silence, "frame words with sil models");
  thmm->add_option("--out", thmm_out, "model set JSON")->required();
  thmm->add_option("--log", thmm_log, "CSV of the training log-likelihood per iteration");

  // recognize
  auto* rec = app.add_subcommand("recognize", "N-best isolated-word recognition");
  std::string rec_hmm, rec_in, rec_out;
  rec->add_option("--hmm", rec_hmm, "model set JSON")->required();
  rec->add_option("--lexicon", cfg.lexicon, "lexicon TSV");
  rec->add_option("--ext", cfg.extension_map, "vowel extension map TSV");
  rec->add_option("--in", rec_in, "feature CSV")->required();
  rec->add_option("--nbest", cfg.n_best)->capture_default_str();
  rec->add_option("--out", rec_out, "result JSON (stdout if omitted)");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "N-best accuracy over a labeled list, per split tag");
  std::string eval_hmm, eval_list, eval_out;
  eval->add_option("--hmm", eval_hmm, "model set JSON")->required();
  eval->add_option("--lexicon", cfg.lexicon, "lexicon TSV");
  eval->add_option("--ext", cfg.extension_map, "vowel extension map TSV");
  eval->add_option("--list", eval_list, "TSV: features.csv<TAB>word<TAB>tag,tag")->required();
  eval->add_option("--nbest", cfg.n_best)->capture_default_str();
  eval->add_option("--out", eval_out, "report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    cfg.validate();
    if (show_config) {
      out << cfg.to_text();
      return 0;
    }
    if (app.get_subcommands().empty()) {
      err << app.help();
      return 1;
    }

    if (*synth) {
      SynthConfig sc;
      if (!synth_cfg_path.empty()) sc = load_synth_config(synth_cfg_path);
      // --seed overrides the synth config only when given explicitly.
      if (app.count("--seed") || synth_cfg_path.empty()) sc.seed = cfg.seed;
      if (noise) sc.noise_sigma = *noise;
      if (fpv) sc.frames_per_viseme = *fpv;
      if (speaker) sc.speaker = *speaker;
      if (mouth_scale) sc.mouth_scale = *mouth_scale;
      sc.validate();
      FrameSequence seq;
      if (stills > 0) {
        seq = synthesize_training_stills(stills, sc);
      } else if (!script.empty()) {
        seq = synthesize_sequence(parse_viseme_list(script), sc);
      } else if (!word.empty()) {
        VisemeSeq vs;
        if (!cfg.lexicon.empty()) {
          auto lex = lexicon_from(cfg);
          vs = lex.contains(word) ? lex.at(word) : hangul_to_visemes(word);
        } else {
          vs = hangul_to_visemes(word);
        }
        seq = synthesize_sequence(vs, sc);
        seq.label = word;
      } else {
        throw ValidationError("synth needs one of --script, --word or --stills");
      }
      save_sequence(seq, synth_out);
      return 0;
    }

    if (*tsel) {
      auto set = labeled_dct_set(load_all(tsel_in));
      auto sel = select_top_coefficients(set, cfg.d);
      write_json(tsel_out, sel);
      if (!spectrum_out.empty()) {
        std::ostringstream csv;
        csv << "index,u,v,gain\n";
        const int w = set.samples.front().width;
        for (std::size_t k = 0; k < set.coefficient_count(); ++k)
          csv << k << ',' << k % w << ',' << k / w << ',' << format_fixed6(information_gain(set, k)) << "\n";
        write_text(spectrum_out, csv.str());
      }
      return 0;
    }

    if (*tgmm) {
      auto set = labeled_dct_set(load_all(tgmm_in));
      ShapeModelConfig mc;
      mc.d = cfg.d;
      mc.K = cfg.K;
      mc.em.seed = cfg.seed;
      auto sel = tgmm_sel.empty() ? select_top_coefficients(set, cfg.d) : read_json_as<SelectionResult>(tgmm_sel);
      write_json(tgmm_out, train_shape_model(set, sel, mc));
      return 0;
    }

    if (*tgam) {
      write_json(tgam_out, estimate_gamma(load_all(tgam_in)));
      return 0;
    }

    if (*ext) {
      auto model = read_json_as<CalibratedShapeModel>(ext_model);
      auto gamma = read_json_as<GammaTable>(ext_gamma);
      auto seq = load_sequence(ext_in);
      save_feature_csv(ext_out, assemble_observations(seq, model, gamma, cfg.pipe()));
      return 0;
    }

    if (*thmm) {
      auto lex = lexicon_from(cfg);
      std::vector<TrainingUtterance> corpus;
      for (const auto& e : load_list(thmm_list)) corpus.push_back({load_feature_csv(e.features), e.word});
      auto rep = train_models(corpus, lex, cfg.hmm());
      write_json(thmm_out, rep.models);
      if (!thmm_log.empty()) {
        std::ostringstream csv;
        csv << "phase,iteration,log_likelihood\n";
        for (std::size_t i = 0; i < rep.mono_log_likelihood.size(); ++i)
          csv << "mono," << i << ',' << format_fixed6(rep.mono_log_likelihood[i]) << "\n";
        for (std::size_t i = 0; i < rep.tri_log_likelihood.size(); ++i)
          csv << "tri," << i << ',' << format_fixed6(rep.tri_log_likelihood[i]) << "\n";
        write_text(thmm_log, csv.str());
      }
      return 0;
    }

    if (*rec) {
      auto lex = lexicon_from(cfg);
      auto models = read_json_as<ModelSet>(rec_hmm);
      auto res = recognize_nbest(load_feature_csv(rec_in), lex, models, cfg.n_best);
      auto j = recognition_json(res);
      if (rec_out.empty()) out << j.dump(2) << "\n";
      else write_json(rec_out, j);
      if (res.all_infeasible) err << "warning: no lexicon word can align with " << rec_in << "\n";
      return 0;
    }

    if (*eval) {
      auto lex = lexicon_from(cfg);
      auto models = read_json_as<ModelSet>(eval_hmm);
      std::vector<EvalItem> items;
      for (const auto& e : load_list(eval_list)) items.push_back({load_feature_csv(e.features), e.word, e.tags});
      auto rep = evaluate_accuracy(items, lex, models, cfg.n_best);
      if (!eval_out.empty()) write_json(eval_out, rep);
      out << format_report_table(rep);
      return 0;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lipread
