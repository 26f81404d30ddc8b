#ifndef JNKIT_HMM_HPP_
#define JNKIT_HMM_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "jnkit/corpus.hpp"

namespace jnkit {

inline constexpr std::string_view kStartTag = "⟨START⟩";
inline constexpr std::string_view kStopTag = "⟨STOP⟩";
inline constexpr std::string_view kUnseenSuffix = "⟨UNSEEN⟩";
inline constexpr int kHmmFormatVersion = 1;

enum class UnknownWordMode { kUniform, kSuffix };
std::string_view to_string(UnknownWordMode mode);
UnknownWordMode parse_unknown_word_mode(std::string_view text);

struct HmmConfig {
  double transition_smoothing_k = 0.1;
  double emission_smoothing_k = 0.001;
  UnknownWordMode unknown_word_mode = UnknownWordMode::kSuffix;
  int suffix_max_len = 3;
  /// Words seen at most this often feed the unknown-word model.
  int rare_threshold = 1;
  double suffix_smoothing_k = 1.0;

  void validate() const;
};

/// Log-space parameters of a bigram HMM. Index t runs over `tags`; the
/// reserved start and stop states live in start_logp / stop_logp.
struct HmmParams {
  std::vector<std::string> tags;
  std::vector<double> start_logp;
  std::vector<std::vector<double>> transition_logp;  // [prev][next]
  std::vector<double> stop_logp;
  /// log P(word | t) for vocabulary words, one entry per tag.
  std::map<std::string, std::vector<double>> emission_logp;
  /// log P(w | t) for a vocabulary word never seen with t.
  std::vector<double> emission_floor_logp;
  /// log P(UNK | t): mass reserved for out-of-vocabulary words.
  std::vector<double> unknown_logp;
  UnknownWordMode unknown_word_mode = UnknownWordMode::kUniform;
  /// suffix_logp[L-1][suffix][t] = log P(suffix of length L | UNK, t).
  /// The kUnseenSuffix entry holds the unseen-suffix mass.
  std::vector<std::map<std::string, std::vector<double>>> suffix_logp;
};

struct TagSequence {
  std::vector<std::string> tags;
  double score = 0.0;
};

class HmmModel {
 public:
  /// Throws ValidationError when table shapes disagree with `tags`.
  explicit HmmModel(HmmParams params);

  const HmmParams& params() const { return params_; }
  std::size_t num_tags() const { return params_.tags.size(); }
  /// ⟨START⟩, the real tags in decode order, ⟨STOP⟩.
  std::vector<std::string> tagset() const;
  /// Index of a real tag; throws ValidationError for unknown tags.
  std::size_t tag_index(std::string_view tag) const;
  bool in_vocabulary(const std::string& word) const;

  /// log P(word | t) for every tag, routing unknown words to the UNK model.
  std::vector<double> emission_column(const std::string& word) const;

 private:
  HmmParams params_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

HmmModel train_hmm(const Corpus& train, const HmmConfig& config = {});

/// Bigram Viterbi. Among equal-scoring predecessors the earliest tag wins, so
/// the returned path is the reverse-lexicographically smallest optimum.
TagSequence viterbi_decode(const HmmModel& model,
                           const std::vector<std::string>& words);

/// Objective of one path, summed in the same order Viterbi uses.
/// -inf for impossible paths.
double sequence_log_prob(const HmmModel& model,
                         const std::vector<std::string>& words,
                         const std::vector<std::string>& tags);

/// Replaces the POS column of every sentence with decoded tags.
Corpus tag_corpus(const HmmModel& model, const Corpus& corpus);

std::string save_hmm(const HmmModel& model, int version = kHmmFormatVersion);
/// Throws ModelLoadError on version mismatch, truncation or bad tables.
HmmModel load_hmm(std::string_view text,
                  int expected_version = kHmmFormatVersion);

}  // namespace jnkit

#endif  // JNKIT_HMM_HPP_
