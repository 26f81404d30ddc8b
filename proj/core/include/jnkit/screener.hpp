#ifndef JNKIT_SCREENER_HPP_
#define JNKIT_SCREENER_HPP_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jnkit/corpus.hpp"

namespace jnkit {

inline constexpr std::string_view kNominalAdjectiveTag = "JN";

/// Grammatical paradigm for nominal-adjective candidates: an adjective at the
/// end of an NP chunk, preceded inside the chunk by a determiner and at most
/// `max_adverbs` adverbs ("the poor", "the very rich").
struct ScreenConfig {
  std::set<std::string> adjective_tags{"JJ", "JJS"};
  bool include_jjr = false;
  std::set<std::string> determiner_tags{"DT"};
  std::set<std::string> adverb_tags{"RB", "RBR", "RBS"};
  int max_adverbs = 1;
  bool require_np_final = true;
  /// Only consulted when require_np_final is off.
  std::set<std::string> forbidden_next_tags{"NN",  "NNS", "NNP", "NNPS",
                                            "JJ",  "JJR", "JJS", "CD"};
  std::string chunk_type = "NP";

  /// adjective_tags plus JJR when include_jjr is set.
  std::set<std::string> effective_adjective_tags() const;
  /// Throws ConfigError on an empty adjective set or negative max_adverbs.
  void validate() const;
};

struct CandidateRef {
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;
  std::string original_pos;

  friend auto operator<=>(const CandidateRef&, const CandidateRef&) = default;
};

enum class ReviewDecision { kAccept, kReject };

/// Manual-check overrides. Position keys win over word keys.
struct ReviewList {
  std::map<std::pair<std::size_t, std::size_t>, ReviewDecision> by_position;
  std::map<std::string, ReviewDecision> by_word;

  bool empty() const { return by_position.empty() && by_word.empty(); }
};

/// Candidates in (sentence, token) order. Chunks are read with the corpus's
/// declared scheme, so IOB1 and IOB2 inputs screen identically.
std::vector<CandidateRef> screen_candidates(const Corpus& corpus,
                                            const ScreenConfig& config);

/// Drops rejected candidates and adds position-keyed accepts. An accept that
/// points outside the corpus or at a non-adjective is a ValidationError.
std::vector<CandidateRef> apply_review(const std::vector<CandidateRef>& candidates,
                                       const ReviewList& review,
                                       const Corpus& corpus,
                                       const ScreenConfig& config);

/// Lines of `accept|reject<TAB>s:<sent>:<tok>` or `accept|reject<TAB>w:<word>`.
/// Blank lines and lines starting with '#' are skipped.
ReviewList parse_review_list(std::string_view text);

/// Sets the POS of every referenced token to JN.
Corpus apply_jn_relabel(const Corpus& corpus,
                        const std::vector<CandidateRef>& candidates);

using TagMap = std::map<std::string, std::string>;
TagMap default_jj2nn_mapping();

/// Remaps referenced tokens by their original_pos; unmapped -> ConfigError.
Corpus apply_jj2nn_relabel(const Corpus& corpus,
                           const std::vector<CandidateRef>& candidates,
                           const TagMap& mapping = default_jj2nn_mapping());

/// Puts original_pos back on every referenced token.
Corpus restore_original_pos(const Corpus& corpus,
                            const std::vector<CandidateRef>& candidates);

struct TagHistogram {
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;

  double fraction(const std::string& tag) const;
  double fraction(const std::set<std::string>& tags) const;
};

TagHistogram screening_stats(const std::vector<CandidateRef>& candidates);

/// `sentence<TAB>token<TAB>word<TAB>original_pos`, one candidate per line.
std::string write_candidates(const Corpus& corpus,
                             const std::vector<CandidateRef>& candidates);

/// Reads the export format back. When `corpus` is given, each line's word
/// must match the referenced token (ValidationError otherwise).
std::vector<CandidateRef> parse_candidates(std::string_view text,
                                           const Corpus* corpus = nullptr);

std::string write_screening_stats(const TagHistogram& histogram);

}  // namespace jnkit

#endif  // JNKIT_SCREENER_HPP_
