#ifndef JNKIT_MAXENT_HPP_
#define JNKIT_MAXENT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "jnkit/corpus.hpp"

namespace jnkit {

inline constexpr std::string_view kBosSymbol = "⟨BOS⟩";
inline constexpr std::string_view kEosSymbol = "⟨EOS⟩";
inline constexpr int kMaxEntFormatVersion = 1;

/// Observation predicates; each one is conjoined with every output label.
enum class FeatureTemplate {
  kBias,
  kWord,
  kLowerWord,
  kPos,
  kPrevWord,
  kNextWord,
  kPrevPos,
  kPrevPos2,
  kNextPos,
  kNextPos2,
  kPosBigram,
  kPrevLabel,
  kPrevLabelPos,
  kShape,
};

std::string_view template_name(FeatureTemplate t);
FeatureTemplate parse_template(std::string_view name);
std::vector<FeatureTemplate> default_templates();
/// Templates whose value depends on some token's POS tag.
bool is_pos_template(FeatureTemplate t);

/// "Smith" -> "Xx", "1990" -> "d", "U.S." -> "X.X.".
std::string word_shape(std::string_view word);

struct MaxEntConfig {
  double l2_lambda = 0.1;
  int max_iterations = 200;
  /// Relative objective change; convergence also needs max|grad| <= 10x this.
  double convergence_tol = 1e-6;
  std::vector<FeatureTemplate> templates = default_templates();

  void validate() const;
};

/// Readable predicate strings for one position, in template order.
std::vector<std::string> feature_strings(
    const Sentence& sentence, std::size_t position, std::string_view prev_label,
    const std::vector<FeatureTemplate>& templates);

struct FeatureVector {
  std::vector<std::size_t> ids;  // sorted, unique
};

// ---------------------------------------------------------------------------
// Numerical core. Weight of (feature f, label y) lives at f * num_labels + y.

struct TrainingExample {
  std::vector<std::size_t> features;
  std::size_t label = 0;
};

struct MaxEntProblem {
  std::size_t num_features = 0;
  std::size_t num_labels = 0;
  std::vector<TrainingExample> examples;

  std::size_t num_weights() const { return num_features * num_labels; }
};

struct ObjectiveResult {
  double value = 0.0;
  std::vector<double> gradient;
};

/// sum log P(gold | x) - lambda * |w|^2 and its gradient
/// (observed - expected - 2 lambda w).
ObjectiveResult objective_and_gradient(const std::vector<double>& weights,
                                       const MaxEntProblem& problem,
                                       double l2_lambda);

/// Label distribution for one active feature set.
std::vector<double> label_probabilities(const std::vector<double>& weights,
                                        std::size_t num_labels,
                                        const std::vector<std::size_t>& features);

struct OptimizeTrace {
  /// Objective at the start and after every accepted step.
  std::vector<double> objective_history;
  int iterations = 0;
  bool converged = false;
  double gradient_max_norm = 0.0;
};

/// Full-batch gradient ascent from zero weights. Each iteration tries a
/// Barzilai-Borwein step and halves it until the Armijo condition holds.
std::vector<double> optimize_weights(const MaxEntProblem& problem,
                                     double l2_lambda, int max_iterations,
                                     double convergence_tol,
                                     OptimizeTrace* trace = nullptr);

// ---------------------------------------------------------------------------

class MaxEntModel {
 public:
  MaxEntModel(std::vector<std::string> labels,
              std::vector<FeatureTemplate> templates,
              std::vector<std::string> feature_names,
              std::vector<double> weights);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<FeatureTemplate>& templates() const { return templates_; }
  const std::vector<std::string>& feature_names() const { return names_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Predicates unseen at training time are dropped.
  FeatureVector extract_features(const Sentence& sentence, std::size_t position,
                                 std::string_view prev_label) const;
  std::vector<double> probabilities(const FeatureVector& features) const;

 private:
  std::vector<std::string> labels_;
  std::vector<FeatureTemplate> templates_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> weights_;
};

/// IOB1 input is normalized to IOB2 before labels are collected.
MaxEntModel train_maxent(const Corpus& train, const MaxEntConfig& config = {},
                         OptimizeTrace* trace = nullptr);

/// Rewrites I-X that does not continue an X chunk to B-X.
std::vector<std::string> repair_iob2(std::vector<std::string> labels);

/// Greedy left-to-right decoding, then IOB2 repair.
std::vector<std::string> predict_bio(const MaxEntModel& model,
                                     const Sentence& sentence);

/// Copy of `corpus` (as IOB2) with the predicted chunk column.
Corpus chunk_corpus(const MaxEntModel& model, const Corpus& corpus);

std::string save_maxent(const MaxEntModel& model,
                        int version = kMaxEntFormatVersion);
MaxEntModel load_maxent(std::string_view text,
                        int expected_version = kMaxEntFormatVersion);

}  // namespace jnkit

#endif  // JNKIT_MAXENT_HPP_
