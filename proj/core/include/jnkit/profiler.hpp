#ifndef JNKIT_PROFILER_HPP_
#define JNKIT_PROFILER_HPP_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jnkit/corpus.hpp"

namespace jnkit {

inline constexpr std::string_view kBoundarySymbol = "⟨BOUNDARY⟩";

enum class Direction { kPreceding, kFollowing };
std::string_view to_string(Direction direction);

enum class BoundaryMode {
  kCount,  ///< sentence edges tallied under kBoundarySymbol
  kSkip,   ///< occurrences at a sentence edge are not counted
};

struct ProfileOptions {
  BoundaryMode boundary = BoundaryMode::kCount;
  /// Cosine over each distribution's k most probable tags; 0 keeps all.
  std::size_t top_k = 0;
};

/// Distribution of the POS tag adjacent to a target tag class.
struct TagDistribution {
  Direction direction = Direction::kPreceding;
  std::string target;
  std::map<std::string, std::size_t> counts;
  std::map<std::string, double> probs;
  std::size_t support_count = 0;

  bool empty() const { return support_count == 0; }
};

/// Label for a merged class, e.g. {NN, NNS} -> "NN/NNS".
std::string target_label(const std::set<std::string>& tags);

TagDistribution context_distribution(const Corpus& corpus,
                                     const std::set<std::string>& target_tags,
                                     Direction direction,
                                     const ProfileOptions& options = {},
                                     std::string label = {});

/// Cosine over the union of keys, missing keys are zero. Throws
/// UndefinedSimilarityError when either side is empty.
double cosine_similarity(const TagDistribution& a, const TagDistribution& b,
                         std::size_t top_k = 0);

struct SimilarityPair {
  std::string target_a;
  std::string target_b;
  Direction direction = Direction::kPreceding;
  double cosine = 0.0;
};

struct ProfileReport {
  std::vector<SimilarityPair> pairs;
  std::vector<TagDistribution> distributions;
};

using NamedTagSet = std::pair<std::string, std::set<std::string>>;

/// First target against each of the others, preceding then following.
ProfileReport profile_report(const Corpus& corpus,
                             const std::vector<NamedTagSet>& target_sets,
                             const ProfileOptions& options = {});

/// Similarity table followed by one tag/probability block per distribution.
std::string write_profile_report(const ProfileReport& report);

}  // namespace jnkit

#endif  // JNKIT_PROFILER_HPP_
