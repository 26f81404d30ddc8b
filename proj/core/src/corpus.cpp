#include "jnkit/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "jnkit/errors.hpp"
#include "jnkit/text.hpp"

namespace jnkit {

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::kIob1 ? "iob1" : "iob2";
}

Scheme parse_scheme(std::string_view text) {
  const std::string lower = to_lower_ascii(trim(text));
  if (lower == "iob1") return Scheme::kIob1;
  if (lower == "iob2") return Scheme::kIob2;
  throw ConfigError("unknown BIO scheme '" + std::string(text) +
                    "' (expected iob1 or iob2)");
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

std::optional<BioTag> split_bio(std::string_view tag) {
  if (tag == "O") return BioTag{'O', {}};
  if (tag.size() < 3 || tag[1] != '-') return std::nullopt;
  if (tag[0] != 'B' && tag[0] != 'I') return std::nullopt;
  return BioTag{tag[0], tag.substr(2)};
}

namespace {

// Index of the first token that breaks IOB2 (an I-X not continuing X).
std::optional<std::size_t> first_iob2_violation(const Sentence& sentence) {
  std::string_view open_type;
  bool open = false;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const auto tag = split_bio(sentence[i].bio);
    if (!tag || tag->prefix == 'O') {
      open = false;
    } else if (tag->prefix == 'B') {
      open = true;
      open_type = tag->type;
    } else {
      if (!open || open_type != tag->type) return i;
    }
  }
  return std::nullopt;
}

// B-X opening a chunk that does not directly follow another X chunk.
bool shows_iob2_evidence(const Sentence& sentence) {
  std::string_view prev_type;
  bool prev_in_chunk = false;
  for (const auto& token : sentence) {
    const auto tag = split_bio(token.bio);
    if (!tag || tag->prefix == 'O') {
      prev_in_chunk = false;
      continue;
    }
    if (tag->prefix == 'B' && !(prev_in_chunk && prev_type == tag->type)) {
      return true;
    }
    prev_in_chunk = true;
    prev_type = tag->type;
  }
  return false;
}

}  // namespace

Corpus parse_pos_chunk(std::istream& in, std::optional<Scheme> scheme_override) {
  Corpus corpus;
  Sentence current;
  std::vector<std::size_t> first_lines;
  std::size_t current_first_line = 0;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (current.empty()) return;
    corpus.sentences.push_back(std::move(current));
    first_lines.push_back(current_first_line);
    current.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    const auto fields = split_view(line, '\t');
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 tab-separated fields, found " +
                                    std::to_string(fields.size()));
    }
    for (const auto field : fields) {
      if (field.empty()) throw ParseError(line_no, "empty field");
    }
    if (!split_bio(fields[2])) {
      throw ParseError(line_no, "invalid chunk tag '" + std::string(fields[2]) +
                                    "' (expected O, B-X or I-X)");
    }
    if (current.empty()) current_first_line = line_no;
    current.push_back(Token{std::string(fields[0]), std::string(fields[1]),
                            std::string(fields[2])});
  }
  flush();

  if (scheme_override) {
    corpus.scheme = *scheme_override;
  } else {
    corpus.scheme = std::any_of(corpus.sentences.begin(), corpus.sentences.end(),
                                shows_iob2_evidence)
                        ? Scheme::kIob2
                        : Scheme::kIob1;
  }

  if (corpus.scheme == Scheme::kIob2) {
    for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
      if (const auto bad = first_iob2_violation(corpus.sentences[s])) {
        throw ParseError(first_lines[s] + *bad,
                         "chunk tag '" + corpus.sentences[s][*bad].bio +
                             "' does not continue a chunk (IOB2)");
      }
    }
  }
  return corpus;
}

Corpus parse_pos_chunk(std::string_view text,
                       std::optional<Scheme> scheme_override) {
  std::istringstream in{std::string(text)};
  return parse_pos_chunk(in, scheme_override);
}

Corpus read_pos_chunk_file(const std::string& path,
                           std::optional<Scheme> scheme_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return parse_pos_chunk(in, scheme_override);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path);
  }
}

std::string write_pos_chunk(const Corpus& corpus) {
  std::string out;
  out.reserve(corpus.token_count() * 16);
  for (const auto& sentence : corpus.sentences) {
    for (const auto& t : sentence) {
      out += t.word;
      out += '\t';
      out += t.pos;
      out += '\t';
      out += t.bio;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

void write_pos_chunk_file(const Corpus& corpus, const std::string& path) {
  write_file(path, write_pos_chunk(corpus));
}

std::vector<ChunkSpan> extract_chunks(const Sentence& sentence, Scheme scheme,
                                      std::size_t sentence_index) {
  std::vector<ChunkSpan> spans;
  bool open = false;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const auto tag = split_bio(sentence[i].bio);
    if (!tag) {
      throw ValidationError("invalid chunk tag '" + sentence[i].bio + "'");
    }
    if (tag->prefix == 'O') {
      open = false;
      continue;
    }
    const bool continues =
        tag->prefix == 'I' && open && spans.back().chunk_type == tag->type;
    if (continues) {
      spans.back().end = i;
      continue;
    }
    if (tag->prefix == 'I' && scheme == Scheme::kIob2) {
      throw ValidationError("sentence " + std::to_string(sentence_index) +
                            ", token " + std::to_string(i) + ": '" +
                            sentence[i].bio +
                            "' does not continue a chunk under IOB2");
    }
    spans.push_back(ChunkSpan{sentence_index, i, i, std::string(tag->type)});
    open = true;
  }
  return spans;
}

std::vector<ChunkSpan> extract_chunks(const Corpus& corpus) {
  std::vector<ChunkSpan> all;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    auto spans = extract_chunks(corpus.sentences[s], corpus.scheme, s);
    all.insert(all.end(), spans.begin(), spans.end());
  }
  return all;
}

Corpus normalize_bio(const Corpus& corpus, Scheme target) {
  if (target != Scheme::kIob1 && target != Scheme::kIob2) {
    throw ConfigError("unknown target scheme");
  }
  Corpus out = corpus;
  out.scheme = target;
  for (std::size_t s = 0; s < out.sentences.size(); ++s) {
    Sentence& sentence = out.sentences[s];
    const auto spans = extract_chunks(corpus.sentences[s], corpus.scheme, s);
    for (std::size_t k = 0; k < spans.size(); ++k) {
      const ChunkSpan& span = spans[k];
      bool begin_with_b = true;
      if (target == Scheme::kIob1) {
        begin_with_b = k > 0 && spans[k - 1].end + 1 == span.start &&
                       spans[k - 1].chunk_type == span.chunk_type;
      }
      sentence[span.start].bio = (begin_with_b ? "B-" : "I-") + span.chunk_type;
      for (std::size_t i = span.start + 1; i <= span.end; ++i) {
        sentence[i].bio = "I-" + span.chunk_type;
      }
    }
  }
  return out;
}

namespace {

// Uniform in [0, bound): rejects the low 2^64 mod bound raw values.
std::uint64_t bounded(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = engine();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace

SplitIndices split_indices(std::size_t n, double train_fraction,
                           std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0,1), got " +
                      format_g17(train_fraction));
  }
  if (n < 2) {
    throw ValidationError("splitting needs at least 2 sentences, got " +
                          std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 engine(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(bounded(engine, i + 1));
    std::swap(order[i], order[j]);
  }
  const auto train_count = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));
  SplitIndices split;
  split.train.assign(order.begin(), order.begin() + train_count);
  split.test.assign(order.begin() + train_count, order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Corpus select_sentences(const Corpus& corpus,
                        const std::vector<std::size_t>& indices) {
  Corpus out;
  out.scheme = corpus.scheme;
  out.sentences.reserve(indices.size());
  for (const auto i : indices) {
    if (i >= corpus.sentences.size()) {
      throw ValidationError("sentence index " + std::to_string(i) +
                            " out of range");
    }
    out.sentences.push_back(corpus.sentences[i]);
  }
  return out;
}

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus,
                                       double train_fraction,
                                       std::uint64_t seed) {
  const auto split = split_indices(corpus.sentences.size(), train_fraction, seed);
  return {select_sentences(corpus, split.train),
          select_sentences(corpus, split.test)};
}

}  // namespace jnkit
