// Shared hand-built corpora for unit and acceptance tests.
#ifndef JNKIT_TESTS_FIXTURES_HPP_
#define JNKIT_TESTS_FIXTURES_HPP_

#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jnkit/corpus.hpp"
#include "jnkit/maxent.hpp"

namespace jnkit::testing {

/// "word/POS/BIO word/POS/BIO" per sentence -> pos-chunk text.
inline std::string to_pos_chunk(const std::vector<std::string>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    std::istringstream in(s);
    std::string item;
    while (in >> item) {
      const auto b = item.rfind('/');
      const auto a = item.rfind('/', b - 1);
      out += item.substr(0, a) + '\t' + item.substr(a + 1, b - a - 1) + '\t' +
             item.substr(b + 1) + '\n';
    }
    out += '\n';
  }
  return out;
}

inline Corpus corpus_of(const std::vector<std::string>& sentences) {
  return parse_pos_chunk(to_pos_chunk(sentences), Scheme::kIob2);
}

// 25 sentences, IOB2. The screening paradigm was applied by hand; every
// nominal adjective is listed in kScreenerFixtureGold with the reason.
inline const std::vector<std::string> kScreenerFixture{
    // 0: "The poor" closes its NP after a determiner -> token 1.
    "The/DT/B-NP poor/JJ/I-NP are/VBP/B-VP waiting/VBG/I-VP in/IN/B-PP "
    "long/JJ/B-NP bread/NN/I-NP lines/NNS/I-NP ././O",
    // 1: determiner + one adverb, NP-final -> token 2.
    "The/DT/B-NP very/RB/I-NP rich/JJ/I-NP in/IN/B-PP this/DT/B-NP "
    "town/NN/I-NP own/VBP/B-VP many/JJ/B-NP old/JJ/I-NP "
    "houses/NNS/I-NP ././O",
    // 2: followed by a noun inside the NP -> none.
    "the/DT/B-NP poor/JJ/I-NP people/NNS/I-NP left/VBD/B-VP ././O",
    // 3: no determiner -> none.
    "Little/JJ/B-NP good/NN/I-NP will/MD/B-VP come/VB/I-VP of/IN/B-PP "
    "it/PRP/B-NP ././O",
    // 4: superlative, NP-final -> token 1.
    "The/DT/B-NP best/JJS/I-NP is/VBZ/B-VP yet/RB/I-VP to/TO/I-VP "
    "come/VB/I-VP ././O",
    // 5: object NP "the elderly" -> token 3.
    "She/PRP/B-NP helped/VBD/B-VP the/DT/B-NP elderly/JJ/I-NP ././O",
    // 6: two coordinated NPs -> tokens 1 and 4.
    "The/DT/B-NP unemployed/JJ/I-NP and/CC/O the/DT/B-NP homeless/JJ/I-NP "
    "need/VBP/B-VP help/NN/B-NP ././O",
    // 7: adjective before the head noun -> none.
    "The/DT/B-NP big/JJ/I-NP dog/NN/I-NP barked/VBD/B-VP ././O",
    // 8: determiner + adverb + adjective + noun -> none.
    "A/DT/B-NP very/RB/I-NP old/JJ/I-NP man/NN/I-NP smiled/VBD/B-VP ././O",
    // 9: two adverbs exceed max_adverbs = 1 -> none.
    "The/DT/B-NP really/RB/I-NP very/RB/I-NP rich/JJ/I-NP left/VBD/B-VP ././O",
    // 10: two determiners -> none.
    "this/DT/B-NP the/DT/I-NP poor/JJ/I-NP suffer/VBP/B-VP ././O",
    // 11: predicative adjective in an ADJP -> none.
    "He/PRP/B-NP is/VBZ/B-VP very/RB/B-ADJP rich/JJ/I-ADJP ././O",
    // 12: predicative, no determiner -> none.
    "They/PRP/B-NP were/VBD/B-VP poor/JJ/B-ADJP ././O",
    // 13: adjective followed by noun -> none.
    "The/DT/B-NP rich/JJ/I-NP man/NN/I-NP left/VBD/B-VP ././O",
    // 14: RBS + JJ + noun -> none.
    "The/DT/B-NP most/RBS/I-NP expensive/JJ/I-NP car/NN/I-NP won/VBD/B-VP ././O",
    // 15: no adjectives.
    "Prices/NNS/B-NP rose/VBD/B-VP sharply/RB/B-ADVP ././O",
    // 16: ADJP after copula -> none.
    "The/DT/B-NP market/NN/I-NP was/VBD/B-VP quiet/JJ/B-ADJP ././O",
    // 17: adjective + noun inside a PP object -> none.
    "In/IN/B-PP the/DT/B-NP long/JJ/I-NP run/NN/I-NP ,/,/O we/PRP/B-NP "
    "win/VBP/B-VP ././O",
    // 18: -> none.
    "Each/DT/B-NP new/JJ/I-NP plan/NN/I-NP failed/VBD/B-VP ././O",
    // 19: stacked adjectives before a noun -> none.
    "The/DT/B-NP quick/JJ/I-NP brown/JJ/I-NP fox/NN/I-NP jumped/VBD/B-VP ././O",
    // 20: no determiner -> none.
    "Old/JJ/B-NP habits/NNS/I-NP die/VBP/B-VP hard/RB/B-ADVP ././O",
    // 21: adjective stack before noun -> none.
    "The/DT/B-NP poor/JJ/I-NP old/JJ/I-NP man/NN/I-NP wept/VBD/B-VP ././O",
    // 22: no adjectives.
    "Both/DT/B-NP sides/NNS/I-NP agreed/VBD/B-VP ././O",
    // 23: comparative, JJR excluded by default -> none.
    "The/DT/B-NP richer/JJR/I-NP pay/VBP/B-VP more/JJR/B-NP ././O",
    // 24: adjective inside VP chunk, not NP -> none.
    "Sales/NNS/B-NP looked/VBD/B-VP good/JJ/B-ADJP for/IN/B-PP the/DT/B-NP "
    "year/NN/I-NP ././O",
};

inline const std::set<std::pair<std::size_t, std::size_t>> kScreenerFixtureGold{
    {0, 1}, {1, 2}, {4, 1}, {5, 3}, {6, 1}, {6, 4}};

// Ten two-label examples. Feature 0 fires everywhere, 1 only on label 0,
// 2 only on label 1, 3 on a mix of both.
inline MaxEntProblem separable_problem() {
  MaxEntProblem p;
  p.num_features = 4;
  p.num_labels = 2;
  for (std::size_t i = 0; i < 10; ++i) {
    TrainingExample ex;
    ex.label = i % 2;
    ex.features = {0, ex.label == 0 ? std::size_t{1} : std::size_t{2}};
    if (i % 3 == 0) ex.features.push_back(3);
    p.examples.push_back(ex);
  }
  return p;
}

}  // namespace jnkit::testing

#endif  // JNKIT_TESTS_FIXTURES_HPP_
