#include "jnkit/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "jnkit/errors.hpp"
#include "jnkit/text.hpp"

namespace jnkit {

namespace {

struct TemplateInfo {
  FeatureTemplate id;
  std::string_view name;
  bool uses_pos;
};

constexpr TemplateInfo kTemplates[] = {
    {FeatureTemplate::kBias, "bias", false},
    {FeatureTemplate::kWord, "word", false},
    {FeatureTemplate::kLowerWord, "lower", false},
    {FeatureTemplate::kPos, "pos", true},
    {FeatureTemplate::kPrevWord, "word-1", false},
    {FeatureTemplate::kNextWord, "word+1", false},
    {FeatureTemplate::kPrevPos, "pos-1", true},
    {FeatureTemplate::kPrevPos2, "pos-2", true},
    {FeatureTemplate::kNextPos, "pos+1", true},
    {FeatureTemplate::kNextPos2, "pos+2", true},
    {FeatureTemplate::kPosBigram, "pos-1|pos", true},
    {FeatureTemplate::kPrevLabel, "label-1", false},
    {FeatureTemplate::kPrevLabelPos, "label-1|pos", true},
    {FeatureTemplate::kShape, "shape", false},
};

const TemplateInfo& info(FeatureTemplate t) {
  for (const auto& i : kTemplates) {
    if (i.id == t) return i;
  }
  throw ConfigError("unknown feature template");
}

}  // namespace

std::string_view template_name(FeatureTemplate t) { return info(t).name; }

FeatureTemplate parse_template(std::string_view name) {
  for (const auto& i : kTemplates) {
    if (i.name == name) return i.id;
  }
  throw ConfigError("unknown feature template '" + std::string(name) + "'");
}

std::vector<FeatureTemplate> default_templates() {
  std::vector<FeatureTemplate> out;
  for (const auto& i : kTemplates) out.push_back(i.id);
  return out;
}

bool is_pos_template(FeatureTemplate t) { return info(t).uses_pos; }

std::string word_shape(std::string_view word) {
  std::string shape;
  for (const char c : word) {
    char k = c;
    if (c >= 'A' && c <= 'Z') {
      k = 'X';
    } else if (c >= 'a' && c <= 'z') {
      k = 'x';
    } else if (c >= '0' && c <= '9') {
      k = 'd';
    }
    if (shape.empty() || shape.back() != k) shape += k;
  }
  return shape;
}

void MaxEntConfig::validate() const {
  if (!(l2_lambda >= 0.0)) throw ConfigError("maxent: l2_lambda must be >= 0");
  if (max_iterations < 1) throw ConfigError("maxent: max_iterations must be >= 1");
  if (!(convergence_tol > 0.0)) {
    throw ConfigError("maxent: convergence_tol must be > 0");
  }
  if (templates.empty()) throw ConfigError("maxent: no feature templates");
}

std::vector<std::string> feature_strings(
    const Sentence& sentence, std::size_t position, std::string_view prev_label,
    const std::vector<FeatureTemplate>& templates) {
  const auto n = static_cast<std::ptrdiff_t>(sentence.size());
  const auto at = static_cast<std::ptrdiff_t>(position);
  auto word = [&](std::ptrdiff_t i) -> std::string {
    if (i < 0) return std::string(kBosSymbol);
    if (i >= n) return std::string(kEosSymbol);
    return sentence[i].word;
  };
  auto pos = [&](std::ptrdiff_t i) -> std::string {
    if (i < 0) return std::string(kBosSymbol);
    if (i >= n) return std::string(kEosSymbol);
    return sentence[i].pos;
  };

  std::vector<std::string> out;
  out.reserve(templates.size());
  for (const auto t : templates) {
    switch (t) {
      case FeatureTemplate::kBias:
        out.emplace_back("bias");
        break;
      case FeatureTemplate::kWord:
        out.push_back("w=" + word(at));
        break;
      case FeatureTemplate::kLowerWord:
        out.push_back("lw=" + to_lower_ascii(word(at)));
        break;
      case FeatureTemplate::kPos:
        out.push_back("p=" + pos(at));
        break;
      case FeatureTemplate::kPrevWord:
        out.push_back("w-1=" + word(at - 1));
        break;
      case FeatureTemplate::kNextWord:
        out.push_back("w+1=" + word(at + 1));
        break;
      case FeatureTemplate::kPrevPos:
        out.push_back("p-1=" + pos(at - 1));
        break;
      case FeatureTemplate::kPrevPos2:
        out.push_back("p-2=" + pos(at - 2));
        break;
      case FeatureTemplate::kNextPos:
        out.push_back("p+1=" + pos(at + 1));
        break;
      case FeatureTemplate::kNextPos2:
        out.push_back("p+2=" + pos(at + 2));
        break;
      case FeatureTemplate::kPosBigram:
        out.push_back("p-1|p=" + pos(at - 1) + "|" + pos(at));
        break;
      case FeatureTemplate::kPrevLabel:
        out.push_back("y-1=" + std::string(prev_label));
        break;
      case FeatureTemplate::kPrevLabelPos:
        out.push_back("y-1|p=" + std::string(prev_label) + "|" + pos(at));
        break;
      case FeatureTemplate::kShape:
        out.push_back("shape=" + word_shape(word(at)));
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> label_probabilities(const std::vector<double>& weights,
                                        std::size_t num_labels,
                                        const std::vector<std::size_t>& features) {
  std::vector<double> scores(num_labels, 0.0);
  for (const auto f : features) {
    const double* row = weights.data() + f * num_labels;
    for (std::size_t y = 0; y < num_labels; ++y) scores[y] += row[y];
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (auto& s : scores) {
    s = std::exp(s - top);
    z += s;
  }
  for (auto& s : scores) s /= z;
  return scores;
}

ObjectiveResult objective_and_gradient(const std::vector<double>& weights,
                                       const MaxEntProblem& problem,
                                       double l2_lambda) {
  const std::size_t k = problem.num_labels;
  if (weights.size() != problem.num_weights()) {
    throw ValidationError("weight vector size does not match the problem");
  }
  ObjectiveResult result;
  result.gradient.assign(weights.size(), 0.0);
  std::vector<double> scores(k);
  double value = 0.0;

  for (const auto& ex : problem.examples) {
    std::fill(scores.begin(), scores.end(), 0.0);
    for (const auto f : ex.features) {
      const double* row = weights.data() + f * k;
      for (std::size_t y = 0; y < k; ++y) scores[y] += row[y];
    }
    const double top = *std::max_element(scores.begin(), scores.end());
    double z = 0.0;
    for (std::size_t y = 0; y < k; ++y) z += std::exp(scores[y] - top);
    const double log_z = top + std::log(z);
    value += scores[ex.label] - log_z;
    for (std::size_t y = 0; y < k; ++y) scores[y] = std::exp(scores[y] - log_z);
    for (const auto f : ex.features) {
      double* g = result.gradient.data() + f * k;
      for (std::size_t y = 0; y < k; ++y) g[y] -= scores[y];
      g[ex.label] += 1.0;
    }
  }

  double norm2 = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    norm2 += weights[i] * weights[i];
    result.gradient[i] -= 2.0 * l2_lambda * weights[i];
  }
  result.value = value - l2_lambda * norm2;
  return result;
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<double> optimize_weights(const MaxEntProblem& problem,
                                     double l2_lambda, int max_iterations,
                                     double convergence_tol,
                                     OptimizeTrace* trace) {
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 60;

  OptimizeTrace local;
  OptimizeTrace& tr = trace ? *trace : local;
  tr = OptimizeTrace{};

  std::vector<double> w(problem.num_weights(), 0.0);
  auto current = objective_and_gradient(w, problem, l2_lambda);
  tr.objective_history.push_back(current.value);
  double step = 1.0 / std::max(1.0, max_abs(current.gradient));

  for (int iter = 0; iter < max_iterations; ++iter) {
    const double gnorm2 = dot(current.gradient, current.gradient);
    if (gnorm2 == 0.0) {
      tr.converged = true;
      break;
    }
    std::vector<double> trial(w.size());
    ObjectiveResult next;
    bool accepted = false;
    double t = step;
    for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        trial[i] = w[i] + t * current.gradient[i];
      }
      next = objective_and_gradient(trial, problem, l2_lambda);
      if (std::isfinite(next.value) &&
          next.value >= current.value + kArmijo * t * gnorm2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    // Barzilai-Borwein: s = w' - w, y = g' - g; s.y < 0 on a concave objective.
    double ss = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double s = trial[i] - w[i];
      const double y = next.gradient[i] - current.gradient[i];
      ss += s * s;
      sy += s * y;
    }
    step = sy < 0.0 ? ss / -sy : 2.0 * t;
    step = std::clamp(step, 1e-12, 1e12);

    const double rel = std::abs(next.value - current.value) /
                       std::max(1.0, std::abs(current.value));
    w.swap(trial);
    current = std::move(next);
    tr.objective_history.push_back(current.value);
    tr.iterations = iter + 1;
    if (rel <= convergence_tol &&
        max_abs(current.gradient) <= 10.0 * convergence_tol) {
      tr.converged = true;
      break;
    }
  }
  tr.gradient_max_norm = max_abs(current.gradient);
  return w;
}

// ---------------------------------------------------------------------------

MaxEntModel::MaxEntModel(std::vector<std::string> labels,
                         std::vector<FeatureTemplate> templates,
                         std::vector<std::string> feature_names,
                         std::vector<double> weights)
    : labels_(std::move(labels)),
      templates_(std::move(templates)),
      names_(std::move(feature_names)),
      weights_(std::move(weights)) {
  if (labels_.empty()) throw ValidationError("MaxEnt model has no labels");
  if (weights_.size() != names_.size() * labels_.size()) {
    throw ValidationError("MaxEnt weight count does not match features x labels");
  }
  for (const double w : weights_) {
    if (!std::isfinite(w)) throw ValidationError("non-finite MaxEnt weight");
  }
  index_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw ValidationError("duplicate feature '" + names_[i] + "'");
    }
  }
}

FeatureVector MaxEntModel::extract_features(const Sentence& sentence,
                                            std::size_t position,
                                            std::string_view prev_label) const {
  FeatureVector fv;
  for (const auto& name :
       feature_strings(sentence, position, prev_label, templates_)) {
    if (const auto it = index_.find(name); it != index_.end()) {
      fv.ids.push_back(it->second);
    }
  }
  std::sort(fv.ids.begin(), fv.ids.end());
  fv.ids.erase(std::unique(fv.ids.begin(), fv.ids.end()), fv.ids.end());
  return fv;
}

std::vector<double> MaxEntModel::probabilities(const FeatureVector& features) const {
  return label_probabilities(weights_, labels_.size(), features.ids);
}

MaxEntModel train_maxent(const Corpus& train, const MaxEntConfig& config,
                         OptimizeTrace* trace) {
  config.validate();
  if (train.token_count() == 0) throw TrainingError("empty training corpus");
  const Corpus corpus = train.scheme == Scheme::kIob2
                            ? train
                            : normalize_bio(train, Scheme::kIob2);

  std::set<std::string> label_set;
  for (const auto& s : corpus.sentences) {
    for (const auto& t : s) label_set.insert(t.bio);
  }
  std::vector<std::string> labels(label_set.begin(), label_set.end());
  std::map<std::string, std::size_t> label_index;
  for (std::size_t i = 0; i < labels.size(); ++i) label_index[labels[i]] = i;

  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> index;
  MaxEntProblem problem;
  problem.num_labels = labels.size();
  for (const auto& sentence : corpus.sentences) {
    std::string prev(kBosSymbol);
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      TrainingExample ex;
      ex.label = label_index.at(sentence[i].bio);
      for (auto& name : feature_strings(sentence, i, prev, config.templates)) {
        auto [it, inserted] = index.emplace(name, names.size());
        if (inserted) names.push_back(std::move(name));
        ex.features.push_back(it->second);
      }
      std::sort(ex.features.begin(), ex.features.end());
      ex.features.erase(std::unique(ex.features.begin(), ex.features.end()),
                        ex.features.end());
      problem.examples.push_back(std::move(ex));
      prev = sentence[i].bio;
    }
  }
  problem.num_features = names.size();

  auto weights = optimize_weights(problem, config.l2_lambda,
                                  config.max_iterations, config.convergence_tol,
                                  trace);
  return MaxEntModel(std::move(labels), config.templates, std::move(names),
                     std::move(weights));
}

std::vector<std::string> repair_iob2(std::vector<std::string> labels) {
  std::string_view prev_type;
  bool prev_in_chunk = false;
  for (auto& label : labels) {
    const auto tag = split_bio(label);
    if (!tag || tag->prefix == 'O') {
      prev_in_chunk = false;
      continue;
    }
    if (tag->prefix == 'I' && !(prev_in_chunk && prev_type == tag->type)) {
      label = "B-" + std::string(tag->type);
    }
    prev_in_chunk = true;
    prev_type = split_bio(label)->type;
  }
  return labels;
}

std::vector<std::string> predict_bio(const MaxEntModel& model,
                                     const Sentence& sentence) {
  std::vector<std::string> out;
  out.reserve(sentence.size());
  std::string prev(kBosSymbol);
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const auto probs = model.probabilities(model.extract_features(sentence, i, prev));
    const auto best = static_cast<std::size_t>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    out.push_back(model.labels()[best]);
    prev = out.back();
  }
  return repair_iob2(std::move(out));
}

Corpus chunk_corpus(const MaxEntModel& model, const Corpus& corpus) {
  Corpus out = corpus;
  out.scheme = Scheme::kIob2;
  for (auto& sentence : out.sentences) {
    const auto labels = predict_bio(model, sentence);
    for (std::size_t i = 0; i < sentence.size(); ++i) sentence[i].bio = labels[i];
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::string_view kMagic = "jnkit-maxent";
}

std::string save_maxent(const MaxEntModel& model, int version) {
  std::string out = std::string(kMagic) + '\t' + std::to_string(version) + '\n';
  out += "[LABELS]\n";
  for (const auto& l : model.labels()) out += l + '\n';
  out += "[TEMPLATES]\n";
  for (const auto t : model.templates()) {
    out += std::string(template_name(t)) + '\n';
  }
  out += "[FEATURES]\n";
  const auto& names = model.feature_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    out += names[i] + '\t' + std::to_string(i) + '\n';
  }
  out += "[WEIGHTS]\n";
  const std::size_t k = model.labels().size();
  const auto& w = model.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    out += std::to_string(i / k) + '\t' + model.labels()[i % k] + '\t' +
           format_g17(w[i]) + '\n';
  }
  out += "[END]\n";
  return out;
}

MaxEntModel load_maxent(std::string_view text, int expected_version) {
  auto lines = split_view(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ModelLoadError("empty MaxEnt model file");
  const auto header = split_view(lines[0], '\t');
  if (header.size() != 2 || header[0] != kMagic) {
    throw ModelLoadError("not a MaxEnt model file");
  }
  long long version = 0;
  try {
    version = parse_int(header[1], "version");
  } catch (const ConfigError&) {
    throw ModelLoadError("unreadable MaxEnt model version");
  }
  if (version != expected_version) {
    throw ModelLoadError("MaxEnt model format version " +
                         std::to_string(version) + " but this reader expects " +
                         std::to_string(expected_version));
  }
  if (lines.back() != "[END]") {
    throw ModelLoadError("MaxEnt model file is truncated (missing [END])");
  }

  std::vector<std::string> labels;
  std::vector<FeatureTemplate> templates;
  std::vector<std::string> names;
  std::vector<std::tuple<std::size_t, std::string, double>> entries;
  std::string section;
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    const auto line = lines[i];
    const auto where = "MaxEnt model line " + std::to_string(i + 1) + ": ";
    if (line.starts_with('[')) {
      section = std::string(line);
      continue;
    }
    try {
      if (section == "[LABELS]") {
        labels.emplace_back(line);
      } else if (section == "[TEMPLATES]") {
        templates.push_back(parse_template(line));
      } else if (section == "[FEATURES]") {
        const auto f = split_view(line, '\t');
        if (f.size() != 2) throw ModelLoadError(where + "bad feature row");
        if (static_cast<std::size_t>(parse_int(f[1], "feature id")) !=
            names.size()) {
          throw ModelLoadError(where + "feature ids must be dense and ordered");
        }
        names.emplace_back(f[0]);
      } else if (section == "[WEIGHTS]") {
        const auto f = split_view(line, '\t');
        if (f.size() != 3) throw ModelLoadError(where + "bad weight row");
        entries.emplace_back(
            static_cast<std::size_t>(parse_int(f[0], "feature id")),
            std::string(f[1]), parse_double(f[2], "weight"));
      } else {
        throw ModelLoadError(where + "row outside a known section");
      }
    } catch (const ConfigError& e) {
      throw ModelLoadError(where + e.what());
    }
  }
  std::map<std::string, std::size_t> label_index;
  for (std::size_t i = 0; i < labels.size(); ++i) label_index[labels[i]] = i;
  std::vector<double> weights(names.size() * labels.size(), 0.0);
  for (const auto& [f, label, v] : entries) {
    const auto it = label_index.find(label);
    if (f >= names.size() || it == label_index.end()) {
      throw ModelLoadError("MaxEnt weight refers to an unknown feature or label");
    }
    weights[f * labels.size() + it->second] = v;
  }
  try {
    return MaxEntModel(std::move(labels), std::move(templates), std::move(names),
                       std::move(weights));
  } catch (const ValidationError& e) {
    throw ModelLoadError(e.what());
  }
}

}  // namespace jnkit
