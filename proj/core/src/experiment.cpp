#include "jnkit/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <utility>

#include "jnkit/digest.hpp"
#include "jnkit/text.hpp"

#ifndef JNKIT_VERSION
#define JNKIT_VERSION "0.0.0"
#endif

namespace jnkit {

namespace fs = std::filesystem;

std::string_view toolkit_version() { return JNKIT_VERSION; }

std::string_view to_string(Task task) {
  return task == Task::kPosHmm ? "pos_hmm" : "bio_maxent";
}

Task parse_task(std::string_view text) {
  const auto s = trim(text);
  if (s == "pos_hmm") return Task::kPosHmm;
  if (s == "bio_maxent") return Task::kBioMaxent;
  throw ConfigError("unknown task '" + std::string(s) +
                    "' (expected pos_hmm or bio_maxent)");
}

std::string_view to_string(Transform transform) {
  return transform == Transform::kJn ? "jn" : "jj2nn";
}

Transform parse_transform(std::string_view text) {
  const auto s = to_lower_ascii(trim(text));
  if (s == "jn" || s == "j2n") return Transform::kJn;
  if (s == "jj2nn") return Transform::kJj2nn;
  throw ConfigError("unknown transform '" + s + "' (expected jn or jj2nn)");
}

int exit_code_for(const std::exception& e) {
  if (const auto* stage = dynamic_cast<const StageError*>(&e)) {
    return stage->exit_code();
  }
  if (dynamic_cast<const ConfigError*>(&e)) return kExitUsage;
  if (dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const ValidationError*>(&e) ||
      dynamic_cast<const AlignmentError*>(&e) ||
      dynamic_cast<const TrainingError*>(&e) ||
      dynamic_cast<const ModelLoadError*>(&e) ||
      dynamic_cast<const ComparisonError*>(&e) ||
      dynamic_cast<const UndefinedSimilarityError*>(&e) ||
      dynamic_cast<const IoError*>(&e)) {
    return kExitData;
  }
  return kExitInternal;
}

StageError::StageError(std::string stage, const std::exception& cause)
    : Error("stage '" + stage + "' failed: " + cause.what()),
      stage_(std::move(stage)),
      exit_code_(exit_code_for(cause)) {}

void ExperimentConfig::validate() const {
  if (tasks.empty()) throw ConfigError("experiment: tasks must not be empty");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("experiment: train_fraction must lie in (0,1)");
  }
  if (!(dev_fraction >= 0.0 && dev_fraction < 1.0)) {
    throw ConfigError("experiment: dev_fraction must lie in [0,1)");
  }
  if (input_path.empty()) throw ConfigError("experiment: input path is required");
  if (output_dir.empty()) throw ConfigError("experiment: output_dir is required");
  screen.validate();
  hmm.validate();
  maxent.validate();
}

namespace {

TagMap parse_tag_map(std::string_view text) {
  TagMap out;
  for (auto item : split_view(text, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto kv = split_view(item, ':');
    if (kv.size() != 2 || trim(kv[0]).empty() || trim(kv[1]).empty()) {
      throw ConfigError("tag map entries look like JJ:NN, got '" +
                        std::string(item) + "'");
    }
    out[std::string(trim(kv[0]))] = std::string(trim(kv[1]));
  }
  return out;
}

std::string format_tag_map(const TagMap& map) {
  std::vector<std::string> items;
  for (const auto& [k, v] : map) items.push_back(k + ":" + v);
  return join(items, ",");
}

}  // namespace

void apply_setting(ExperimentConfig& c, std::string_view raw_key,
                   std::string_view value) {
  const std::string key(trim(raw_key));
  const std::string v(trim(value));
  auto as_int = [&] { return static_cast<int>(parse_int(v, key)); };
  auto as_double = [&] { return parse_double(v, key); };

  if (key == "input") {
    c.input_path = v;
  } else if (key == "output_dir") {
    c.output_dir = v;
  } else if (key == "seed") {
    const auto s = parse_int(v, key);
    if (s < 0) throw ConfigError("seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "train_fraction") {
    c.train_fraction = as_double();
  } else if (key == "dev_fraction") {
    c.dev_fraction = as_double();
  } else if (key == "scheme") {
    if (to_lower_ascii(v) == "auto" || v.empty()) {
      c.scheme.reset();
    } else {
      c.scheme = parse_scheme(v);
    }
  } else if (key == "review") {
    c.review_path = v;
  } else if (key == "tasks") {
    c.tasks.clear();
    for (const auto& t : parse_tag_set(v)) c.tasks.insert(parse_task(t));
  } else if (key == "transform") {
    c.transform = parse_transform(v);
  } else if (key == "jj2nn.mapping") {
    c.jj2nn_mapping = parse_tag_map(v);
  } else if (key == "screen.adjective_tags") {
    c.screen.adjective_tags = parse_tag_set(v);
  } else if (key == "screen.include_jjr") {
    c.screen.include_jjr = parse_bool(v, key);
  } else if (key == "screen.determiner_tags") {
    c.screen.determiner_tags = parse_tag_set(v);
  } else if (key == "screen.adverb_tags") {
    c.screen.adverb_tags = parse_tag_set(v);
  } else if (key == "screen.max_adverbs") {
    c.screen.max_adverbs = as_int();
  } else if (key == "screen.require_np_final") {
    c.screen.require_np_final = parse_bool(v, key);
  } else if (key == "screen.forbidden_next_tags") {
    c.screen.forbidden_next_tags = parse_tag_set(v);
  } else if (key == "screen.chunk_type") {
    c.screen.chunk_type = v;
  } else if (key == "hmm.transition_smoothing_k") {
    c.hmm.transition_smoothing_k = as_double();
  } else if (key == "hmm.emission_smoothing_k") {
    c.hmm.emission_smoothing_k = as_double();
  } else if (key == "hmm.unknown_word_mode") {
    c.hmm.unknown_word_mode = parse_unknown_word_mode(v);
  } else if (key == "hmm.suffix_max_len") {
    c.hmm.suffix_max_len = as_int();
  } else if (key == "hmm.rare_threshold") {
    c.hmm.rare_threshold = as_int();
  } else if (key == "hmm.suffix_smoothing_k") {
    c.hmm.suffix_smoothing_k = as_double();
  } else if (key == "maxent.l2_lambda") {
    c.maxent.l2_lambda = as_double();
  } else if (key == "maxent.max_iterations") {
    c.maxent.max_iterations = as_int();
  } else if (key == "maxent.convergence_tol") {
    c.maxent.convergence_tol = as_double();
  } else if (key == "maxent.templates") {
    c.maxent.templates.clear();
    for (auto name : split_view(v, ',')) {
      name = trim(name);
      if (!name.empty()) c.maxent.templates.push_back(parse_template(name));
    }
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void apply_config_text(ExperimentConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  for (auto line : split_view(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    }
    try {
      apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
}

std::string config_snapshot(const ExperimentConfig& c) {
  std::vector<std::string> task_names;
  for (const auto t : c.tasks) task_names.emplace_back(to_string(t));
  std::vector<std::string> templates;
  for (const auto t : c.maxent.templates) templates.emplace_back(template_name(t));

  std::string out;
  auto put = [&out](std::string_view k, const std::string& v) {
    out += std::string(k) + '=' + v + '\n';
  };
  put("input", c.input_path);
  put("seed", std::to_string(c.seed));
  put("train_fraction", format_g17(c.train_fraction));
  put("dev_fraction", format_g17(c.dev_fraction));
  put("scheme", c.scheme ? std::string(to_string(*c.scheme)) : "auto");
  put("review", c.review_path);
  put("tasks", join(task_names, ","));
  put("transform", std::string(to_string(c.transform)));
  put("jj2nn.mapping", format_tag_map(c.jj2nn_mapping));
  put("screen.adjective_tags", format_tag_set(c.screen.adjective_tags));
  put("screen.include_jjr", c.screen.include_jjr ? "true" : "false");
  put("screen.determiner_tags", format_tag_set(c.screen.determiner_tags));
  put("screen.adverb_tags", format_tag_set(c.screen.adverb_tags));
  put("screen.max_adverbs", std::to_string(c.screen.max_adverbs));
  put("screen.require_np_final", c.screen.require_np_final ? "true" : "false");
  put("screen.forbidden_next_tags", format_tag_set(c.screen.forbidden_next_tags));
  put("screen.chunk_type", c.screen.chunk_type);
  put("hmm.transition_smoothing_k", format_g17(c.hmm.transition_smoothing_k));
  put("hmm.emission_smoothing_k", format_g17(c.hmm.emission_smoothing_k));
  put("hmm.unknown_word_mode", std::string(to_string(c.hmm.unknown_word_mode)));
  put("hmm.suffix_max_len", std::to_string(c.hmm.suffix_max_len));
  put("hmm.rare_threshold", std::to_string(c.hmm.rare_threshold));
  put("hmm.suffix_smoothing_k", format_g17(c.hmm.suffix_smoothing_k));
  put("maxent.l2_lambda", format_g17(c.maxent.l2_lambda));
  put("maxent.max_iterations", std::to_string(c.maxent.max_iterations));
  put("maxent.convergence_tol", format_g17(c.maxent.convergence_tol));
  put("maxent.templates", join(templates, ","));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Arm {
  std::string name;
  Corpus train;
  Corpus test;
};

class Run {
 public:
  explicit Run(const ExperimentConfig& config)
      : config_(config), root_(config.output_dir) {}

  template <class F>
  auto stage(const std::string& name, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        record_time(name, t0);
      } else {
        auto result = body();
        record_time(name, t0);
        return result;
      }
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(name, e);
    }
  }

  void write(const std::string& relative, const std::string& content) {
    const fs::path path = root_ / relative;
    fs::create_directories(path.parent_path());
    write_file(path.string(), content);
    outputs_[relative] = sha256_hex(content);
  }

  void note(const std::string& key, const std::string& value) {
    facts_.emplace_back(key, value);
  }

  std::string manifest() const {
    std::string out = "jnkit-manifest\t1\n";
    out += "toolkit_version\t" + std::string(toolkit_version()) + '\n';
    out += "[config]\n" + config_snapshot(config_);
    out += "[facts]\n";
    for (const auto& [k, v] : facts_) out += k + '\t' + v + '\n';
    out += "[outputs]\n";
    for (const auto& [path, digest] : outputs_) out += path + '\t' + digest + '\n';
    return out;
  }

  std::string timings() const {
    std::string out = "stage\tseconds\n";
    for (const auto& [name, s] : timings_) out += name + '\t' + format_fixed(s, 6) + '\n';
    return out;
  }

  const fs::path& root() const { return root_; }

 private:
  void record_time(const std::string& name,
                   std::chrono::steady_clock::time_point t0) {
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - t0;
    timings_.emplace_back(name, d.count());
  }

  const ExperimentConfig& config_;
  fs::path root_;
  std::map<std::string, std::string> outputs_;
  std::vector<std::pair<std::string, std::string>> facts_;
  std::vector<std::pair<std::string, double>> timings_;
};

std::string bio_column(const Corpus& corpus) {
  std::string out;
  for (const auto& s : corpus.sentences) {
    for (const auto& t : s) out += t.bio + '\n';
    out += '\n';
  }
  return out;
}

std::string index_list(const std::vector<std::size_t>& v) {
  std::string out;
  for (const auto i : v) out += std::to_string(i) + '\n';
  return out;
}

std::vector<Position> test_positions(const std::vector<CandidateRef>& candidates,
                                     const std::vector<std::size_t>& test) {
  std::map<std::size_t, std::size_t> local;
  for (std::size_t j = 0; j < test.size(); ++j) local[test[j]] = j;
  std::vector<Position> out;
  for (const auto& c : candidates) {
    if (const auto it = local.find(c.sentence_index); it != local.end()) {
      out.emplace_back(it->second, c.token_index);
    }
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    throw StageError("config", e);
  }
  Run run(config);
  ExperimentResult result;

  // Inputs are read in their own scheme and processed as IOB2.
  Scheme original_scheme = Scheme::kIob2;
  const Corpus corpus = run.stage("load", [&] {
    const std::string text = read_file(config.input_path);
    Corpus raw;
    try {
      raw = parse_pos_chunk(text, config.scheme);
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.detail(), config.input_path);
    }
    original_scheme = raw.scheme;
    run.note("input.sha256", sha256_hex(text));
    run.note("input.sentences", std::to_string(raw.sentences.size()));
    run.note("input.tokens", std::to_string(raw.token_count()));
    run.note("input.scheme", std::string(to_string(raw.scheme)));
    return normalize_bio(raw, Scheme::kIob2);
  });
  auto external = [&](const Corpus& c) {
    return write_pos_chunk(normalize_bio(c, original_scheme));
  };

  result.candidates = run.stage("screen", [&] {
    auto candidates = screen_candidates(corpus, config.screen);
    run.note("screen.raw_candidates", std::to_string(candidates.size()));
    if (!config.review_path.empty()) {
      const auto review = parse_review_list(read_file(config.review_path));
      candidates = apply_review(candidates, review, corpus, config.screen);
    }
    run.note("screen.candidates", std::to_string(candidates.size()));
    run.write("candidates.tsv", write_candidates(corpus, candidates));
    run.write("screen_stats.tsv", write_screening_stats(screening_stats(candidates)));
    return candidates;
  });

  const Corpus modified = run.stage("relabel", [&] {
    Corpus out = config.transform == Transform::kJn
                     ? apply_jn_relabel(corpus, result.candidates)
                     : apply_jj2nn_relabel(corpus, result.candidates,
                                           config.jj2nn_mapping);
    const auto base_bio = sha256_hex(bio_column(corpus));
    const auto mod_bio = sha256_hex(bio_column(out));
    run.note("baseline.bio_column.sha256", base_bio);
    run.note("modified.bio_column.sha256", mod_bio);
    if (base_bio != mod_bio) {
      throw std::logic_error("relabeling changed the BIO column");
    }
    return out;
  });

  std::vector<Arm> arms = run.stage("split", [&] {
    result.split = split_indices(corpus.sentences.size(), config.train_fraction,
                                 config.seed);
    std::vector<std::size_t> dev;
    if (config.dev_fraction > 0.0) {
      // Stage-local seed derived from the top-level one.
      const std::uint64_t dev_seed = config.seed ^ 0x9E3779B97F4A7C15ULL;
      const auto inner = split_indices(result.split.train.size(),
                                       1.0 - config.dev_fraction, dev_seed);
      std::vector<std::size_t> train;
      for (const auto i : inner.train) train.push_back(result.split.train[i]);
      for (const auto i : inner.test) dev.push_back(result.split.train[i]);
      result.split.train = std::move(train);
    }
    if (result.split.train.empty() || result.split.test.empty()) {
      throw ValidationError("split left the train or test part empty");
    }
    const auto train_digest = sha256_hex(index_list(result.split.train));
    const auto test_digest = sha256_hex(index_list(result.split.test));
    run.note("split.train.sentences", std::to_string(result.split.train.size()));
    run.note("split.test.sentences", std::to_string(result.split.test.size()));
    run.note("split.dev.sentences", std::to_string(dev.size()));
    std::vector<Arm> out;
    for (const auto* source : {&corpus, &modified}) {
      const std::string name = source == &corpus ? "baseline" : "modified";
      Arm arm{name, select_sentences(*source, result.split.train),
              select_sentences(*source, result.split.test)};
      run.note(name + ".split.train.sha256", train_digest);
      run.note(name + ".split.test.sha256", test_digest);
      run.write(name + "/train.pos-chunk", external(arm.train));
      run.write(name + "/test.pos-chunk", external(arm.test));
      if (!dev.empty()) {
        run.write(name + "/dev.pos-chunk",
                  external(select_sentences(*source, dev)));
      }
      out.push_back(std::move(arm));
    }
    return out;
  });

  const auto focus_positions = test_positions(result.candidates, result.split.test);
  run.note("test.candidates", std::to_string(focus_positions.size()));

  for (const Task task : config.tasks) {
    const std::string dir(to_string(task));
    TaskOutcome outcome;
    for (const auto& arm : arms) {
      const bool is_base = arm.name == "baseline";
      EvalReport report = run.stage(dir + "." + arm.name, [&] {
        if (task == Task::kPosHmm) {
          const HmmModel model = train_hmm(arm.train, config.hmm);
          run.write(dir + "/" + arm.name + ".model", save_hmm(model));
          const Corpus pred = tag_corpus(model, arm.test);
          run.write(dir + "/" + arm.name + ".pred.pos-chunk", external(pred));
          std::set<std::string> focus_tags;
          const std::vector<Position>* positions = &focus_positions;
          if (is_base) {
            focus_tags = config.screen.effective_adjective_tags();
          } else if (config.transform == Transform::kJn) {
            focus_tags = {std::string(kNominalAdjectiveTag)};
            positions = nullptr;
          } else {
            for (const auto& [from, to] : config.jj2nn_mapping) focus_tags.insert(to);
          }
          return evaluate(arm.test, pred, Column::kPos, focus_tags, positions);
        }
        const MaxEntModel model = train_maxent(arm.train, config.maxent);
        run.write(dir + "/" + arm.name + ".model", save_maxent(model));
        const Corpus pred = chunk_corpus(model, arm.test);
        run.write(dir + "/" + arm.name + ".pred.pos-chunk", external(pred));
        return evaluate(arm.test, pred, Column::kBio);
      });
      run.write(dir + "/" + arm.name + ".report.tsv", render_report_tsv(report));
      (is_base ? outcome.baseline : outcome.modified) = std::move(report);
    }
    run.stage(dir + ".compare", [&] {
      outcome.delta = compare_runs(outcome.baseline, outcome.modified);
      run.write(dir + "/comparison.txt",
                render_comparison_table(outcome.baseline, outcome.modified));
      run.write(dir + "/comparison.tsv",
                render_comparison_tsv(outcome.baseline, outcome.modified));
      run.write(dir + "/delta.tsv", render_delta_tsv(outcome.delta));
      run.write(dir + "/metrics.txt",
                render_key_values(outcome.baseline, "baseline") +
                    render_key_values(outcome.modified, "modified"));
    });
    result.tasks.emplace(task, std::move(outcome));
  }

  run.stage("manifest", [&] {
    result.manifest = run.manifest();
    write_file((run.root() / "manifest.txt").string(), result.manifest);
    write_file((run.root() / "timings.txt").string(), run.timings());
  });
  return result;
}

}  // namespace jnkit
