#ifndef JNKIT_SYNTHETIC_HPP_
#define JNKIT_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "jnkit/corpus.hpp"

namespace jnkit {

/// Seeded toy English grammar producing WSJ-like pos-chunk data, with
/// nominal-adjective noun phrases ("the poor", "the very rich") injected at
/// roughly `nominal_rate` per token.
struct SyntheticConfig {
  std::uint64_t seed = 1;
  std::size_t target_tokens = 50000;
  double nominal_rate = 0.001;
  Scheme scheme = Scheme::kIob2;
};

struct SyntheticCorpus {
  Corpus corpus;
  /// (sentence, token) of every injected nominal adjective.
  std::vector<std::pair<std::size_t, std::size_t>> nominal_positions;
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& config);

}  // namespace jnkit

#endif  // JNKIT_SYNTHETIC_HPP_
