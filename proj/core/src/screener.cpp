#include "jnkit/screener.hpp"

#include <algorithm>
#include <sstream>

#include "jnkit/errors.hpp"
#include "jnkit/text.hpp"

namespace jnkit {

std::set<std::string> ScreenConfig::effective_adjective_tags() const {
  auto tags = adjective_tags;
  if (include_jjr) tags.insert("JJR");
  return tags;
}

void ScreenConfig::validate() const {
  if (effective_adjective_tags().empty()) {
    throw ConfigError("screen: adjective_tags must not be empty");
  }
  if (max_adverbs < 0) throw ConfigError("screen: max_adverbs must be >= 0");
  if (determiner_tags.empty()) {
    throw ConfigError("screen: determiner_tags must not be empty");
  }
}

namespace {

bool is_candidate(const Sentence& sentence, const ChunkSpan& chunk,
                  std::size_t i, const ScreenConfig& config,
                  const std::set<std::string>& adjectives) {
  if (!adjectives.contains(sentence[i].pos)) return false;

  if (config.require_np_final) {
    if (i != chunk.end) return false;
  } else if (i + 1 < sentence.size() &&
             config.forbidden_next_tags.contains(sentence[i + 1].pos)) {
    return false;
  }

  // Walk left inside the chunk: adverbs, then exactly one determiner.
  std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) - 1;
  const auto start = static_cast<std::ptrdiff_t>(chunk.start);
  int adverbs = 0;
  while (j >= start && config.adverb_tags.contains(sentence[j].pos)) {
    ++adverbs;
    --j;
  }
  if (adverbs > config.max_adverbs) return false;
  if (j < start || !config.determiner_tags.contains(sentence[j].pos)) {
    return false;
  }
  if (j - 1 >= start && config.determiner_tags.contains(sentence[j - 1].pos)) {
    return false;
  }
  return true;
}

void check_ref(const Corpus& corpus, const CandidateRef& ref) {
  if (ref.sentence_index >= corpus.sentences.size() ||
      ref.token_index >= corpus.sentences[ref.sentence_index].size()) {
    throw ValidationError("dangling candidate reference (" +
                          std::to_string(ref.sentence_index) + "," +
                          std::to_string(ref.token_index) + ")");
  }
}

}  // namespace

std::vector<CandidateRef> screen_candidates(const Corpus& corpus,
                                            const ScreenConfig& config) {
  config.validate();
  const auto adjectives = config.effective_adjective_tags();
  std::vector<CandidateRef> out;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const Sentence& sentence = corpus.sentences[s];
    for (const auto& chunk : extract_chunks(sentence, corpus.scheme, s)) {
      if (chunk.chunk_type != config.chunk_type) continue;
      for (std::size_t i = chunk.start; i <= chunk.end; ++i) {
        if (is_candidate(sentence, chunk, i, config, adjectives)) {
          out.push_back(CandidateRef{s, i, sentence[i].pos});
        }
      }
    }
  }
  return out;
}

std::vector<CandidateRef> apply_review(const std::vector<CandidateRef>& candidates,
                                       const ReviewList& review,
                                       const Corpus& corpus,
                                       const ScreenConfig& config) {
  const auto adjectives = config.effective_adjective_tags();
  std::set<CandidateRef> kept;
  for (const auto& c : candidates) {
    const auto pos_it =
        review.by_position.find({c.sentence_index, c.token_index});
    if (pos_it != review.by_position.end()) {
      if (pos_it->second == ReviewDecision::kAccept) kept.insert(c);
      continue;
    }
    check_ref(corpus, c);
    const auto& word = corpus.sentences[c.sentence_index][c.token_index].word;
    const auto word_it = review.by_word.find(word);
    if (word_it != review.by_word.end() &&
        word_it->second == ReviewDecision::kReject) {
      continue;
    }
    kept.insert(c);
  }
  for (const auto& [key, decision] : review.by_position) {
    if (decision != ReviewDecision::kAccept) continue;
    const CandidateRef probe{key.first, key.second, {}};
    check_ref(corpus, probe);
    const Token& token = corpus.sentences[key.first][key.second];
    if (!adjectives.contains(token.pos)) {
      throw ValidationError("review accepts s:" + std::to_string(key.first) +
                            ":" + std::to_string(key.second) + " ('" +
                            token.word + "/" + token.pos +
                            "') which is not an adjective");
    }
    kept.insert(CandidateRef{key.first, key.second, token.pos});
  }
  return {kept.begin(), kept.end()};
}

ReviewList parse_review_list(std::string_view text) {
  ReviewList review;
  std::size_t line_no = 0;
  for (auto line : split_view(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = split_view(line, '\t');
    if (fields.size() != 2) {
      throw ParseError(line_no, "review line needs 'decision<TAB>key'");
    }
    ReviewDecision decision;
    if (fields[0] == "accept") {
      decision = ReviewDecision::kAccept;
    } else if (fields[0] == "reject") {
      decision = ReviewDecision::kReject;
    } else {
      throw ParseError(line_no, "decision must be accept or reject, got '" +
                                    std::string(fields[0]) + "'");
    }
    const std::string_view key = fields[1];
    if (key.starts_with("w:") && key.size() > 2) {
      review.by_word[std::string(key.substr(2))] = decision;
    } else if (key.starts_with("s:")) {
      const auto parts = split_view(key.substr(2), ':');
      if (parts.size() != 2) throw ParseError(line_no, "bad position key");
      try {
        const auto s = parse_int(parts[0], "sentence");
        const auto t = parse_int(parts[1], "token");
        if (s < 0 || t < 0) throw ConfigError("negative index");
        review.by_position[{static_cast<std::size_t>(s),
                            static_cast<std::size_t>(t)}] = decision;
      } catch (const ConfigError& e) {
        throw ParseError(line_no, e.what());
      }
    } else {
      throw ParseError(line_no, "key must be s:<sent>:<tok> or w:<word>");
    }
  }
  return review;
}

Corpus apply_jn_relabel(const Corpus& corpus,
                        const std::vector<CandidateRef>& candidates) {
  Corpus out = corpus;
  for (const auto& c : candidates) {
    check_ref(corpus, c);
    out.sentences[c.sentence_index][c.token_index].pos =
        std::string(kNominalAdjectiveTag);
  }
  return out;
}

TagMap default_jj2nn_mapping() { return {{"JJ", "NN"}, {"JJS", "NNS"}}; }

Corpus apply_jj2nn_relabel(const Corpus& corpus,
                           const std::vector<CandidateRef>& candidates,
                           const TagMap& mapping) {
  for (const auto& c : candidates) {
    if (!mapping.contains(c.original_pos)) {
      throw ConfigError("JJ2NN mapping has no entry for '" + c.original_pos +
                        "'");
    }
  }
  Corpus out = corpus;
  for (const auto& c : candidates) {
    check_ref(corpus, c);
    out.sentences[c.sentence_index][c.token_index].pos =
        mapping.at(c.original_pos);
  }
  return out;
}

Corpus restore_original_pos(const Corpus& corpus,
                            const std::vector<CandidateRef>& candidates) {
  Corpus out = corpus;
  for (const auto& c : candidates) {
    check_ref(corpus, c);
    out.sentences[c.sentence_index][c.token_index].pos = c.original_pos;
  }
  return out;
}

double TagHistogram::fraction(const std::string& tag) const {
  if (total == 0) return 0.0;
  const auto it = counts.find(tag);
  return it == counts.end() ? 0.0
                            : static_cast<double>(it->second) /
                                  static_cast<double>(total);
}

double TagHistogram::fraction(const std::set<std::string>& tags) const {
  if (total == 0) return 0.0;
  std::size_t n = 0;
  for (const auto& tag : tags) {
    if (const auto it = counts.find(tag); it != counts.end()) n += it->second;
  }
  return static_cast<double>(n) / static_cast<double>(total);
}

TagHistogram screening_stats(const std::vector<CandidateRef>& candidates) {
  TagHistogram h;
  for (const auto& c : candidates) ++h.counts[c.original_pos];
  h.total = candidates.size();
  return h;
}

std::string write_candidates(const Corpus& corpus,
                             const std::vector<CandidateRef>& candidates) {
  std::string out;
  for (const auto& c : candidates) {
    check_ref(corpus, c);
    out += std::to_string(c.sentence_index) + '\t' +
           std::to_string(c.token_index) + '\t' +
           corpus.sentences[c.sentence_index][c.token_index].word + '\t' +
           c.original_pos + '\n';
  }
  return out;
}

std::vector<CandidateRef> parse_candidates(std::string_view text,
                                           const Corpus* corpus) {
  std::vector<CandidateRef> out;
  std::size_t line_no = 0;
  for (auto line : split_view(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    const auto fields = split_view(line, '\t');
    if (fields.size() != 4) {
      throw ParseError(line_no, "candidate line needs 4 tab-separated fields");
    }
    CandidateRef ref;
    try {
      const auto s = parse_int(fields[0], "sentence");
      const auto t = parse_int(fields[1], "token");
      if (s < 0 || t < 0) throw ConfigError("negative index");
      ref.sentence_index = static_cast<std::size_t>(s);
      ref.token_index = static_cast<std::size_t>(t);
    } catch (const ConfigError& e) {
      throw ParseError(line_no, e.what());
    }
    ref.original_pos = std::string(fields[3]);
    if (corpus) {
      check_ref(*corpus, ref);
      const auto& word =
          corpus->sentences[ref.sentence_index][ref.token_index].word;
      if (word != fields[2]) {
        throw ValidationError("candidate line " + std::to_string(line_no) +
                              " names '" + std::string(fields[2]) +
                              "' but the corpus has '" + word + "'");
      }
    }
    out.push_back(std::move(ref));
  }
  return out;
}

std::string write_screening_stats(const TagHistogram& histogram) {
  std::string out = "tag\tcount\tfraction\n";
  for (const auto& [tag, count] : histogram.counts) {
    out += tag + '\t' + std::to_string(count) + '\t' +
           format_fixed(histogram.fraction(tag), 6) + '\n';
  }
  out += "total\t" + std::to_string(histogram.total) + '\t' +
         format_fixed(histogram.total ? 1.0 : 0.0, 6) + '\n';
  return out;
}

}  // namespace jnkit
