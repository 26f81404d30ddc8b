// jnkit: nominal-adjective screening, relabeling and tagger experiments over
// pos-chunk corpora.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "jnkit/corpus.hpp"
#include "jnkit/evaluator.hpp"
#include "jnkit/experiment.hpp"
#include "jnkit/hmm.hpp"
#include "jnkit/maxent.hpp"
#include "jnkit/profiler.hpp"
#include "jnkit/screener.hpp"
#include "jnkit/synthetic.hpp"
#include "jnkit/text.hpp"

namespace fs = std::filesystem;
using namespace jnkit;

namespace {

struct CommonOptions {
  std::string input;
  std::string output_dir = ".";
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string scheme;
  std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_input = true) {
  auto* in = cmd->add_option("--input,-i", o.input, "pos-chunk input file");
  if (needs_input) in->required();
  cmd->add_option("--output-dir,-o", o.output_dir, "directory for outputs");
  cmd->add_option("--config,-c", o.config_path, "key=value configuration file");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--scheme", o.scheme, "input BIO scheme: iob1, iob2 or auto");
  cmd->add_option("--set", o.settings, "override a configuration key (key=value)");
}

ExperimentConfig build_config(const CommonOptions& o) {
  ExperimentConfig config;
  if (!o.config_path.empty()) apply_config_text(config, read_file(o.config_path));
  for (const auto& s : o.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
  }
  if (!o.input.empty()) config.input_path = o.input;
  if (o.output_dir != "." || config.output_dir.empty()) config.output_dir = o.output_dir;
  if (o.seed) config.seed = *o.seed;
  if (!o.scheme.empty()) apply_setting(config, "scheme", o.scheme);
  return config;
}

// Corpus as read, and the same corpus as IOB2.
struct Loaded {
  Scheme original;
  Corpus canonical;
};

Loaded load(const std::string& path, const ExperimentConfig& config) {
  const Corpus raw = read_pos_chunk_file(path, config.scheme);
  return {raw.scheme, normalize_bio(raw, Scheme::kIob2)};
}

std::string out_path(const CommonOptions& o, const std::string& explicit_path,
                     const std::string& name) {
  if (!explicit_path.empty()) {
    const fs::path p(explicit_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return explicit_path;
  }
  fs::create_directories(o.output_dir);
  return (fs::path(o.output_dir) / name).string();
}

void save_corpus(const Corpus& canonical, Scheme scheme, const std::string& path) {
  write_pos_chunk_file(normalize_bio(canonical, scheme), path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nominal-adjective (JN) corpus toolkit"};
  app.set_version_flag("--version", std::string(toolkit_version()));
  app.require_subcommand(1);

  CommonOptions o;

  auto* screen = app.add_subcommand("screen", "screen nominal-adjective candidates");
  add_common(screen, o);
  std::string review_path;
  screen->add_option("--review", review_path, "review list (accept|reject<TAB>key)");

  auto* relabel = app.add_subcommand("relabel", "apply the JN or JJ2NN transform");
  add_common(relabel, o);
  std::string candidates_path;
  std::string transform = "jn";
  std::string output_file;
  relabel->add_option("--candidates", candidates_path, "candidate export")->required();
  relabel->add_option("--transform", transform, "jn or jj2nn");
  relabel->add_option("--output", output_file, "output file (default <output-dir>/relabeled.pos-chunk)");

  auto* profile = app.add_subcommand("profile", "context tag distributions and cosine similarity");
  add_common(profile, o);
  std::vector<std::string> targets;
  std::string boundary = "count";
  std::size_t top_k = 0;
  profile->add_option("--candidates", candidates_path, "relabel these candidates as JN first");
  profile->add_option("--target", targets, "target class NAME=TAG,TAG or TAG,TAG (first is compared to the rest)");
  profile->add_option("--boundary", boundary, "count or skip sentence boundaries");
  profile->add_option("--top-k", top_k, "truncate distributions to the k most probable tags");

  std::string model_path;
  auto* train_hmm_cmd = app.add_subcommand("train-hmm", "train the bigram HMM POS tagger");
  add_common(train_hmm_cmd, o);
  train_hmm_cmd->add_option("--model", model_path, "model output (default <output-dir>/hmm.model)");

  auto* tag_cmd = app.add_subcommand("tag", "POS-tag a corpus with an HMM model");
  add_common(tag_cmd, o);
  tag_cmd->add_option("--model", model_path, "HMM model file")->required();
  tag_cmd->add_option("--output", output_file, "output file (default <output-dir>/tagged.pos-chunk)");

  auto* train_chunker_cmd = app.add_subcommand("train-chunker", "train the MaxEnt BIO chunker");
  add_common(train_chunker_cmd, o);
  train_chunker_cmd->add_option("--model", model_path, "model output (default <output-dir>/chunker.model)");

  auto* chunk_cmd = app.add_subcommand("chunk", "predict BIO chunks with a MaxEnt model");
  add_common(chunk_cmd, o);
  chunk_cmd->add_option("--model", model_path, "MaxEnt model file")->required();
  chunk_cmd->add_option("--output", output_file, "output file (default <output-dir>/chunked.pos-chunk)");

  auto* eval_cmd = app.add_subcommand("eval", "score predictions against gold");
  add_common(eval_cmd, o, false);
  std::string gold_path, pred_path, column = "pos";
  std::string focus_tags;
  eval_cmd->add_option("--gold", gold_path, "gold pos-chunk file")->required();
  eval_cmd->add_option("--pred", pred_path, "predicted pos-chunk file")->required();
  eval_cmd->add_option("--column", column, "pos or bio");
  eval_cmd->add_option("--candidates", candidates_path, "restrict focus scores to these positions (indices into --gold)");
  eval_cmd->add_option("--focus-tags", focus_tags, "comma-separated tags to score separately");

  auto* experiment = app.add_subcommand("experiment", "baseline vs modified end-to-end run");
  add_common(experiment, o, false);

  auto* synth = app.add_subcommand("synth", "generate a seeded synthetic pos-chunk corpus");
  std::size_t synth_tokens = 50000;
  double synth_rate = 0.001;
  std::uint64_t synth_seed = 1;
  std::string synth_scheme = "iob2";
  synth->add_option("--tokens", synth_tokens, "approximate token count");
  synth->add_option("--rate", synth_rate, "nominal adjectives per token");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--scheme", synth_scheme, "iob1 or iob2");
  synth->add_option("--output", output_file, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*synth) {
      SyntheticConfig sc;
      sc.seed = synth_seed;
      sc.target_tokens = synth_tokens;
      sc.nominal_rate = synth_rate;
      sc.scheme = parse_scheme(synth_scheme);
      const auto generated = generate_synthetic_corpus(sc);
      write_pos_chunk_file(generated.corpus, out_path(o, output_file, "synthetic.pos-chunk"));
      std::cout << "sentences\t" << generated.corpus.sentences.size() << "\ntokens\t"
                << generated.corpus.token_count() << "\nnominal_adjectives\t"
                << generated.nominal_positions.size() << '\n';
      return kExitOk;
    }

    const ExperimentConfig config = build_config(o);

    if (*experiment) {
      const auto result = run_experiment(config);
      std::cout << "candidates\t" << result.candidates.size() << '\n';
      for (const auto& [task, outcome] : result.tasks) {
        std::cout << '\n' << to_string(task) << '\n'
                  << render_comparison_table(outcome.baseline, outcome.modified);
      }
      std::cout << "\nmanifest: " << (fs::path(config.output_dir) / "manifest.txt").string()
                << '\n';
      return kExitOk;
    }

    if (*eval_cmd) {
      const Column col = parse_column(column);
      const Corpus gold = read_pos_chunk_file(gold_path, config.scheme);
      const Corpus pred = read_pos_chunk_file(pred_path, config.scheme);
      std::vector<Position> positions;
      if (!candidates_path.empty()) {
        for (const auto& c : parse_candidates(read_file(candidates_path), &gold)) {
          positions.emplace_back(c.sentence_index, c.token_index);
        }
      }
      const auto report = evaluate(gold, pred, col, parse_tag_set(focus_tags),
                                   candidates_path.empty() ? nullptr : &positions);
      write_file(out_path(o, "", "report.tsv"), render_report_tsv(report));
      std::cout << render_key_values(report, "eval");
      return kExitOk;
    }

    ScreenConfig screen_config = config.screen;
    screen_config.validate();
    const Loaded in = load(config.input_path, config);

    if (*screen) {
      auto candidates = screen_candidates(in.canonical, screen_config);
      if (!review_path.empty()) {
        candidates = apply_review(candidates, parse_review_list(read_file(review_path)),
                                  in.canonical, screen_config);
      }
      write_file(out_path(o, "", "candidates.tsv"), write_candidates(in.canonical, candidates));
      const auto stats = write_screening_stats(screening_stats(candidates));
      write_file(out_path(o, "", "screen_stats.tsv"), stats);
      std::cout << stats;
    } else if (*relabel) {
      const auto candidates = parse_candidates(read_file(candidates_path), &in.canonical);
      const Corpus out = parse_transform(transform) == Transform::kJn
                             ? apply_jn_relabel(in.canonical, candidates)
                             : apply_jj2nn_relabel(in.canonical, candidates,
                                                   config.jj2nn_mapping);
      save_corpus(out, in.original, out_path(o, output_file, "relabeled.pos-chunk"));
    } else if (*profile) {
      Corpus corpus = in.canonical;
      if (!candidates_path.empty()) {
        corpus = apply_jn_relabel(corpus, parse_candidates(read_file(candidates_path), &corpus));
      }
      if (targets.empty()) targets = {"JN", "NN,NNS", "JJ", "JJS"};
      std::vector<NamedTagSet> sets;
      for (const auto& t : targets) {
        const auto eq = t.find('=');
        const auto tags = parse_tag_set(eq == std::string::npos ? t : t.substr(eq + 1));
        sets.emplace_back(eq == std::string::npos ? target_label(tags) : t.substr(0, eq), tags);
      }
      ProfileOptions options;
      options.top_k = top_k;
      if (boundary == "skip") {
        options.boundary = BoundaryMode::kSkip;
      } else if (boundary != "count") {
        throw ConfigError("--boundary must be count or skip");
      }
      const auto report = write_profile_report(profile_report(corpus, sets, options));
      write_file(out_path(o, "", "profile.tsv"), report);
      std::cout << report.substr(0, report.find("\n\n") + 1);
    } else if (*train_hmm_cmd) {
      const auto model = train_hmm(in.canonical, config.hmm);
      write_file(out_path(o, model_path, "hmm.model"), save_hmm(model));
    } else if (*tag_cmd) {
      const auto model = load_hmm(read_file(model_path));
      save_corpus(tag_corpus(model, in.canonical), in.original,
                  out_path(o, output_file, "tagged.pos-chunk"));
    } else if (*train_chunker_cmd) {
      const auto model = train_maxent(in.canonical, config.maxent);
      write_file(out_path(o, model_path, "chunker.model"), save_maxent(model));
    } else if (*chunk_cmd) {
      const auto model = load_maxent(read_file(model_path));
      save_corpus(chunk_corpus(model, in.canonical), in.original,
                  out_path(o, output_file, "chunked.pos-chunk"));
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "jnkit: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
