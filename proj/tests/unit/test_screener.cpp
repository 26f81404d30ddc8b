#include <random>
#include <algorithm>
#include <set>

#include "doctest.h"
#include "jnkit/corpus.hpp"
#include "jnkit/errors.hpp"
#include "jnkit/screener.hpp"
#include "jnkit/text.hpp"
#include "support/fixtures.hpp"

using namespace jnkit;
using testing::corpus_of;

namespace {

// Clause-by-clause rule check on an IOB2 sentence, written without the
// library's chunk extraction.
bool satisfies_rule(const Sentence& s, std::size_t i, const ScreenConfig& cfg) {
  const auto adj = cfg.effective_adjective_tags();
  if (!adj.contains(s[i].pos)) return false;                         // (a)
  const std::string b = "B-" + cfg.chunk_type, in = "I-" + cfg.chunk_type;
  if (s[i].bio != b && s[i].bio != in) return false;                 // (b)
  if (cfg.require_np_final) {                                        // (c)
    if (i + 1 < s.size() && s[i + 1].bio == in) return false;
  } else if (i + 1 < s.size() && cfg.forbidden_next_tags.contains(s[i + 1].pos)) {
    return false;
  }
  // (d): walk left while still inside the same chunk.
  if (s[i].bio == b) return false;
  std::size_t j = i;
  int adverbs = 0;
  while (true) {
    if (j == 0) return false;
    --j;
    const bool chunk_start = s[j].bio == b;
    if (cfg.determiner_tags.contains(s[j].pos)) {
      // exactly one determiner: no second one directly before it in the chunk.
      return chunk_start || !cfg.determiner_tags.contains(s[j - 1].pos);
    }
    if (!cfg.adverb_tags.contains(s[j].pos)) return false;
    if (++adverbs > cfg.max_adverbs) return false;
    if (chunk_start) return false;
  }
}

std::set<std::pair<std::size_t, std::size_t>> positions(
    const std::vector<CandidateRef>& cands) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const auto& c : cands) out.insert({c.sentence_index, c.token_index});
  return out;
}

Corpus random_tagged(std::mt19937_64& rng, std::size_t sentences) {
  const std::vector<std::string> tags{"DT", "JJ", "JJS", "JJR", "RB", "NN",
                                      "NNS", "VBD", "IN", "CD"};
  std::uniform_int_distribution<int> len(1, 8), t(0, 9), act(0, 3);
  Corpus c;
  for (std::size_t k = 0; k < sentences; ++k) {
    Sentence s;
    bool open = false;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      Token tok{"w" + std::to_string(i), tags[t(rng)], "O"};
      const int a = act(rng);
      if (a == 0) {
        open = false;
      } else if (a == 1 || !open) {
        tok.bio = "B-NP";
        open = true;
      } else {
        tok.bio = "I-NP";
      }
      s.push_back(tok);
    }
    c.sentences.push_back(s);
  }
  return c;
}

}  // namespace

TEST_CASE("paradigm examples") {
  const ScreenConfig cfg;
  auto c = corpus_of({"The/DT/B-NP poor/JJ/I-NP are/VBP/B-VP waiting/VBG/I-VP"});
  auto got = screen_candidates(c, cfg);
  REQUIRE(got.size() == 1);
  CHECK(got[0].token_index == 1);
  CHECK(got[0].original_pos == "JJ");

  c = corpus_of({"The/DT/B-NP very/RB/I-NP rich/JJ/I-NP in/IN/B-PP this/DT/B-NP "
                 "town/NN/I-NP"});
  got = screen_candidates(c, cfg);
  REQUIRE(got.size() == 1);
  CHECK(got[0].token_index == 2);

  c = corpus_of({"the/DT/B-NP poor/JJ/I-NP people/NNS/I-NP"});
  CHECK(screen_candidates(c, cfg).empty());
}

TEST_CASE("hand-labeled 25-sentence fixture") {
  const auto c = corpus_of(testing::kScreenerFixture);
  REQUIRE(c.sentences.size() == 25);
  const auto got = screen_candidates(c, ScreenConfig{});
  CHECK(positions(got) == testing::kScreenerFixtureGold);
  CHECK(got.size() == testing::kScreenerFixtureGold.size());
  CHECK(std::is_sorted(got.begin(), got.end()));
  CHECK(screen_candidates(normalize_bio(c, Scheme::kIob1), ScreenConfig{}) == got);
}

TEST_CASE("config knobs") {
  const auto c = corpus_of(testing::kScreenerFixture);
  ScreenConfig cfg;
  cfg.max_adverbs = 2;
  CHECK(positions(screen_candidates(c, cfg)).contains({9, 3}));
  cfg = {};
  cfg.max_adverbs = 0;
  CHECK_FALSE(positions(screen_candidates(c, cfg)).contains({1, 2}));
  // A predeterminer before the single determiner is allowed.
  const auto pdt = corpus_of({"all/PDT/B-NP the/DT/I-NP poor/JJ/I-NP ././O"});
  CHECK(screen_candidates(pdt, ScreenConfig{}).size() == 1);
  cfg = {};
  cfg.include_jjr = true;
  CHECK(positions(screen_candidates(c, cfg)).contains({23, 1}));
  cfg = {};
  cfg.require_np_final = false;
  // "the poor people": next tag NNS is forbidden.
  const auto loose = positions(screen_candidates(c, cfg));
  CHECK_FALSE(loose.contains({2, 1}));
  CHECK(loose.contains({0, 1}));

  cfg = {};
  cfg.adjective_tags.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_adverbs = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("every candidate satisfies the rule and no satisfying token is missed") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = random_tagged(rng, 6);
    ScreenConfig cfg;
    cfg.max_adverbs = trial % 3;
    cfg.include_jjr = trial % 2 == 0;
    cfg.require_np_final = trial % 5 != 0;
    const auto got = screen_candidates(c, cfg);
    CHECK(got == screen_candidates(c, cfg));
    std::set<std::pair<std::size_t, std::size_t>> expected;
    for (std::size_t s = 0; s < c.sentences.size(); ++s)
      for (std::size_t i = 0; i < c.sentences[s].size(); ++i)
        if (satisfies_rule(c.sentences[s], i, cfg)) expected.insert({s, i});
    CHECK(positions(got) == expected);
    for (const auto& cand : got)
      CHECK(cand.original_pos == c.sentences[cand.sentence_index][cand.token_index].pos);
  }
}

TEST_CASE("review overrides") {
  const auto c = corpus_of({"The/DT/B-NP chief/JJ/I-NP spoke/VBD/B-VP",
                            "the/DT/B-NP poor/JJ/I-NP wait/VBP/B-VP",
                            "the/DT/B-NP chief/JJ/I-NP left/VBD/B-VP"});
  const ScreenConfig cfg;
  const auto cands = screen_candidates(c, cfg);
  REQUIRE(cands.size() == 3);

  CHECK(apply_review(cands, ReviewList{}, c, cfg) == cands);

  auto review = parse_review_list("reject\tw:chief\n");
  auto kept = apply_review(cands, review, c, cfg);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].sentence_index == 1);

  // Position keys win over word keys.
  review = parse_review_list("# manual pass\nreject\tw:chief\naccept\ts:2:1\n\n");
  CHECK(positions(apply_review(cands, review, c, cfg)) ==
        std::set<std::pair<std::size_t, std::size_t>>{{1, 1}, {2, 1}});

  const std::vector<CandidateRef> one{cands[0]};
  review = parse_review_list("reject\ts:0:1\n");
  CHECK(apply_review(one, review, c, cfg).empty());

  // Accepting a determiner is invalid; accepting an unscreened JJ adds it.
  CHECK_THROWS_AS(apply_review({}, parse_review_list("accept\ts:0:0\n"), c, cfg),
                  ValidationError);
  const auto c2 = corpus_of({"big/JJ/B-NP dogs/NNS/I-NP"});
  kept = apply_review({}, parse_review_list("accept\ts:0:0\n"), c2, cfg);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].original_pos == "JJ");
  CHECK_THROWS_AS(apply_review({}, parse_review_list("accept\ts:9:0\n"), c2, cfg),
                  ValidationError);
}

TEST_CASE("review list syntax errors") {
  CHECK_THROWS_AS(parse_review_list("maybe\tw:x\n"), ParseError);
  CHECK_THROWS_AS(parse_review_list("accept w:x\n"), ParseError);
  CHECK_THROWS_AS(parse_review_list("accept\ts:1\n"), ParseError);
  CHECK_THROWS_AS(parse_review_list("accept\tx:1\n"), ParseError);
  CHECK(parse_review_list("").empty());
}

TEST_CASE("JN relabel") {
  const auto c = corpus_of({"the/DT/B-NP poor/JJ/I-NP wait/VBP/B-VP"});
  CHECK(apply_jn_relabel(c, {}) == c);
  const auto cands = screen_candidates(c, ScreenConfig{});
  const auto r = apply_jn_relabel(c, cands);
  CHECK(r.sentences[0][1] == Token{"poor", "JN", "I-NP"});
  CHECK(r.sentences[0][0] == c.sentences[0][0]);
  CHECK(r.sentences[0][2] == c.sentences[0][2]);
  CHECK(screen_candidates(r, ScreenConfig{}).empty());
  CHECK(restore_original_pos(r, cands) == c);
  CHECK_THROWS_AS(apply_jn_relabel(c, {CandidateRef{0, 3, "JJ"}}), ValidationError);
  CHECK_THROWS_AS(apply_jn_relabel(c, {CandidateRef{4, 0, "JJ"}}), ValidationError);
}

TEST_CASE("relabel diff touches exactly the candidate lines") {
  const auto c = corpus_of(testing::kScreenerFixture);
  const auto cands = screen_candidates(c, ScreenConfig{});
  for (const bool jn : {true, false}) {
    const auto r = jn ? apply_jn_relabel(c, cands) : apply_jj2nn_relabel(c, cands);
    const auto a = split(write_pos_chunk(c), '\n');
    const auto b = split(write_pos_chunk(r), '\n');
    REQUIRE(a.size() == b.size());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) changed += a[i] != b[i];
    CHECK(changed == cands.size());
    CHECK(write_pos_chunk(restore_original_pos(r, cands)) == write_pos_chunk(c));
  }
}

TEST_CASE("JJ2NN relabel") {
  const auto c = corpus_of({"the/DT/B-NP gifted/JJ/I-NP",
                            "the/DT/B-NP eldest/JJS/I-NP",
                            "the/DT/B-NP richer/JJR/I-NP"});
  CHECK(apply_jj2nn_relabel(c, {}) == c);
  const auto r = apply_jj2nn_relabel(
      c, {CandidateRef{0, 1, "JJ"}, CandidateRef{1, 1, "JJS"}});
  CHECK(r.sentences[0][1].pos == "NN");
  CHECK(r.sentences[1][1].pos == "NNS");
  CHECK(r.sentences[2] == c.sentences[2]);
  CHECK_THROWS_AS(apply_jj2nn_relabel(c, {CandidateRef{2, 1, "JJR"}}), ConfigError);
}

TEST_CASE("screening statistics") {
  CHECK(screening_stats({}).total == 0);
  CHECK(screening_stats({}).counts.empty());

  std::vector<CandidateRef> cands;
  for (int i = 0; i < 983; ++i) cands.push_back({0, 0, i % 2 ? "JJ" : "JJS"});
  for (int i = 0; i < 17; ++i) cands.push_back({0, 0, "JJR"});
  const auto h = screening_stats(cands);
  CHECK(h.total == 1000);
  CHECK(h.fraction(std::set<std::string>{"JJ", "JJS"}) == doctest::Approx(0.983).epsilon(1e-12));
  CHECK(h.fraction("JJR") == doctest::Approx(0.017).epsilon(1e-12));
  double sum = 0;
  for (const auto& [tag, n] : h.counts) sum += h.fraction(tag);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  const auto even = screening_stats({{0, 0, "JJ"}, {0, 1, "JJ"}, {1, 0, "JJS"}, {1, 1, "JJS"}});
  CHECK(even.fraction("JJ") == 0.5);
  CHECK(even.fraction("JJS") == 0.5);
}

TEST_CASE("candidate export round trip") {
  const auto c = corpus_of(testing::kScreenerFixture);
  const auto cands = screen_candidates(c, ScreenConfig{});
  const auto text = write_candidates(c, cands);
  CHECK(text.starts_with("0\t1\tpoor\tJJ\n"));
  CHECK(parse_candidates(text, &c) == cands);
  CHECK(parse_candidates(text) == cands);
  CHECK_THROWS_AS(parse_candidates("0\t1\trich\tJJ\n", &c), ValidationError);
  CHECK(parse_candidates("").empty());
}
