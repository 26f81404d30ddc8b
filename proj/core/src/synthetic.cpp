#include "jnkit/synthetic.hpp"

#include <random>
#include <string>
#include <string_view>

#include "jnkit/errors.hpp"

namespace jnkit {

namespace {

using Words = std::vector<std::string_view>;

const Words kDet{"the", "this", "that", "every", "a", "no"};
const Words kDetPlural{"the", "these", "those", "some", "many"};
const Words kAdj{"big",   "small", "old",  "new",   "red",   "quick",
                 "poor",  "rich",  "young", "strong", "local", "left",
                 "major", "open",  "fast", "public", "early", "sick"};
const Words kAdv{"very", "quite", "really", "extremely"};
const Words kNoun{"dog",   "cat",  "company", "market", "house", "city",
                  "report", "price", "plan",  "bank",   "deal",  "fund",
                  "share", "left",  "group",  "year",   "office", "court"};
const Words kNounPlural{"dogs",  "companies", "markets", "houses", "prices",
                        "plans", "people",    "workers", "banks",  "deals",
                        "funds", "shares",    "groups",  "years",  "officials"};
const Words kProper{"John", "Mary", "Smith", "Chicago", "Apple", "Congress",
                    "Texas", "IBM"};
const Words kPronoun{"he", "she", "they", "it", "we"};
const Words kVerbPresent{"runs", "sees", "buys", "likes", "owns", "helps",
                         "sells", "needs"};
const Words kVerbPlural{"run", "see", "buy", "like", "own", "help", "sell",
                        "need"};
const Words kVerbPast{"ran", "saw", "bought", "liked", "owned", "helped",
                      "left", "sold", "needed"};
const Words kModal{"will", "can", "may", "should"};
const Words kBase{"see", "buy", "help", "like", "own", "sell", "need"};
const Words kPrep{"in", "on", "with", "for", "near", "from"};
const Words kNumber{"two", "three", "ten", "many"};
const Words kNominal{"poor", "rich", "young", "elderly", "unemployed",
                     "wealthy", "sick", "homeless", "faithful", "gifted"};
const Words kNominalSuperlative{"best", "richest", "youngest", "oldest",
                                "brightest"};

class Generator {
 public:
  Generator(const SyntheticConfig& config)
      : engine_(config.seed),
        // About 2.3 NP slots per ~9-token sentence.
        nominal_np_prob_(config.nominal_rate * 9.0 / 2.3) {}

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  bool chance(double p) { return uniform() < p; }
  std::string_view pick(const Words& w) { return w[below(w.size())]; }

  void emit(std::string_view word, std::string_view pos, std::string bio) {
    sentence_.push_back(Token{std::string(word), std::string(pos), std::move(bio)});
  }

  // Returns true when the NP is plural.
  bool noun_phrase(bool allow_nominal) {
    if (allow_nominal && chance(nominal_np_prob_)) {
      emit("the", "DT", "B-NP");
      if (chance(0.3)) emit(pick(kAdv), "RB", "I-NP");
      nominal_tokens_.push_back(sentence_.size());
      if (chance(0.25)) {
        emit(pick(kNominalSuperlative), "JJS", "I-NP");
      } else {
        emit(pick(kNominal), "JJ", "I-NP");
      }
      return true;
    }
    switch (below(9)) {
      case 0:
        emit(pick(kProper), "NNP", "B-NP");
        if (chance(0.3)) emit(pick(kProper), "NNP", "I-NP");
        return false;
      case 1:
        emit(pick(kPronoun), "PRP", "B-NP");
        return false;
      case 2:
        emit(pick(kNumber), "CD", "B-NP");
        emit(pick(kNounPlural), "NNS", "I-NP");
        return true;
      case 3:
      case 4: {
        emit(pick(kDetPlural), "DT", "B-NP");
        if (chance(0.5)) emit(pick(kAdj), "JJ", "I-NP");
        emit(pick(kNounPlural), "NNS", "I-NP");
        return true;
      }
      default: {
        emit(pick(kDet), "DT", "B-NP");
        if (chance(0.45)) {
          if (chance(0.2)) emit(pick(kAdv), "RB", "I-NP");
          emit(pick(kAdj), "JJ", "I-NP");
        }
        emit(pick(kNoun), "NN", "I-NP");
        return false;
      }
    }
  }

  void verb_phrase(bool plural_subject) {
    switch (below(3)) {
      case 0:
        if (plural_subject) {
          emit(pick(kVerbPlural), "VBP", "B-VP");
        } else {
          emit(pick(kVerbPresent), "VBZ", "B-VP");
        }
        break;
      case 1:
        emit(pick(kVerbPast), "VBD", "B-VP");
        break;
      default:
        emit(pick(kModal), "MD", "B-VP");
        emit(pick(kBase), "VB", "I-VP");
        break;
    }
  }

  Sentence sentence() {
    sentence_.clear();
    nominal_tokens_.clear();
    const bool plural = noun_phrase(true);
    verb_phrase(plural);
    if (chance(0.8)) noun_phrase(true);
    if (chance(0.5)) {
      emit(pick(kPrep), "IN", "B-PP");
      noun_phrase(true);
    }
    if (chance(0.15)) {
      emit("and", "CC", "O");
      noun_phrase(false);
      verb_phrase(false);
    }
    emit(".", ".", "O");
    return sentence_;
  }

  const std::vector<std::size_t>& nominal_tokens() const { return nominal_tokens_; }

 private:
  std::mt19937_64 engine_;
  double nominal_np_prob_;
  Sentence sentence_;
  std::vector<std::size_t> nominal_tokens_;
};

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& config) {
  if (!(config.nominal_rate >= 0.0 && config.nominal_rate < 0.2)) {
    throw ConfigError("synthetic nominal_rate must lie in [0, 0.2)");
  }
  Generator gen(config);
  SyntheticCorpus out;
  out.corpus.scheme = Scheme::kIob2;
  std::size_t tokens = 0;
  while (tokens < config.target_tokens) {
    auto s = gen.sentence();
    const std::size_t index = out.corpus.sentences.size();
    for (const auto t : gen.nominal_tokens()) {
      out.nominal_positions.emplace_back(index, t);
    }
    tokens += s.size();
    out.corpus.sentences.push_back(std::move(s));
  }
  if (config.scheme == Scheme::kIob1) {
    out.corpus = normalize_bio(out.corpus, Scheme::kIob1);
  }
  return out;
}

}  // namespace jnkit
