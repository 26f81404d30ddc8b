#ifndef JNKIT_EVALUATOR_HPP_
#define JNKIT_EVALUATOR_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jnkit/corpus.hpp"

namespace jnkit {

enum class Column { kPos, kBio };
std::string_view to_string(Column column);
Column parse_column(std::string_view text);

/// Precision/recall/F1 from confusion counts. Zero denominators give 0 and
/// set `degenerate`.
struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  bool degenerate = false;

  std::size_t support() const { return tp + fn; }
  static Prf from_counts(std::size_t tp, std::size_t fp, std::size_t fn);
};

/// Harmonic mean; 0 when p + r == 0.
double f1_score(double precision, double recall);

struct ChunkScores {
  Prf prf;
  std::size_t gold_chunks = 0;
  std::size_t predicted_chunks = 0;
  std::size_t correct_chunks = 0;
};

using Position = std::pair<std::size_t, std::size_t>;  // (sentence, token)

struct EvalReport {
  Column column = Column::kPos;
  std::size_t total_tokens = 0;
  std::size_t correct_tokens = 0;
  double token_accuracy = 0.0;
  std::map<std::string, Prf> per_tag;
  /// Present for the BIO column.
  std::optional<ChunkScores> chunks;
  /// Scores for the requested focus tags, over the focus positions (e.g.
  /// screened nominal adjectives) or over every token.
  std::map<std::string, Prf> focus;
  /// Number of tokens the focus scores were counted over.
  std::size_t focus_positions = 0;
};

/// Throws AlignmentError unless sentence/token shapes and words agree.
void check_alignment(const Corpus& gold, const Corpus& pred);

double token_accuracy(const Corpus& gold, const Corpus& pred, Column column);

/// `positions`, when given, restricts counting to those tokens.
Prf per_tag_prf(const Corpus& gold, const Corpus& pred, std::string_view tag,
                Column column, const std::vector<Position>* positions = nullptr);

/// Exact (start, end, type) span matching; each corpus is read with its own
/// declared scheme.
ChunkScores chunk_prf(const Corpus& gold, const Corpus& pred);

/// A null `focus_positions` scores the focus tags over all tokens.
EvalReport evaluate(const Corpus& gold, const Corpus& pred, Column column,
                    const std::set<std::string>& focus_tags = {},
                    const std::vector<Position>* focus_positions = nullptr);

struct MetricDelta {
  std::string metric;
  double baseline = 0.0;
  double modified = 0.0;
  double difference = 0.0;
};

enum class TagPresence { kBoth, kBaselineOnly, kModifiedOnly };

struct TagDelta {
  std::string scope;  // "all" or "focus"
  std::string tag;
  TagPresence presence = TagPresence::kBoth;
  std::optional<Prf> baseline;
  std::optional<Prf> modified;
};

struct DeltaReport {
  std::vector<MetricDelta> metrics;
  std::vector<TagDelta> tags;
};

/// Throws ComparisonError when the reports were computed over different
/// columns, token counts or metric sets.
DeltaReport compare_runs(const EvalReport& baseline, const EvalReport& modified);

/// Model | Accuracy (%) | Precision (%) | Recall (%) | F1 (%), aligned text.
/// P/R/F1 are chunk scores; "-" for POS reports.
std::string render_comparison_table(const EvalReport& baseline,
                                    const EvalReport& modified);
std::string render_comparison_tsv(const EvalReport& baseline,
                                  const EvalReport& modified);
std::string render_delta_tsv(const DeltaReport& delta);
std::string render_report_tsv(const EvalReport& report);
/// `prefix.metric: value` lines for scripted checks.
std::string render_key_values(const EvalReport& report, std::string_view prefix);

}  // namespace jnkit

#endif  // JNKIT_EVALUATOR_HPP_
