#ifndef JNKIT_CORPUS_HPP_
#define JNKIT_CORPUS_HPP_

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jnkit {

/// One line of a pos-chunk file.
struct Token {
  std::string word;
  std::string pos;
  std::string bio;

  friend bool operator==(const Token&, const Token&) = default;
};

using Sentence = std::vector<Token>;

/// IOB1: B- only between two adjacent chunks of the same type (WSJ style).
/// IOB2: B- opens every chunk.
enum class Scheme { kIob1, kIob2 };

std::string_view to_string(Scheme scheme);
/// Accepts "iob1"/"iob2" in any case; throws ConfigError otherwise.
Scheme parse_scheme(std::string_view text);

struct Corpus {
  std::vector<Sentence> sentences;
  Scheme scheme = Scheme::kIob2;

  std::size_t token_count() const;
  bool empty() const { return sentences.empty(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Inclusive token range of one chunk.
struct ChunkSpan {
  std::size_t sentence_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string chunk_type;

  friend auto operator<=>(const ChunkSpan&, const ChunkSpan&) = default;
};

/// Decomposed BIO tag. prefix is 'O', 'B' or 'I'; type is empty for O.
struct BioTag {
  char prefix = 'O';
  std::string_view type;
};

/// Splits a chunk tag; nullopt when it is neither "O" nor B-/I- plus a type.
std::optional<BioTag> split_bio(std::string_view tag);

/// Reads a pos-chunk stream. With no override the scheme is IOB2 when some
/// chunk opens with B-X without a preceding X chunk, IOB1 otherwise.
/// Throws ParseError (with line number) on malformed lines.
Corpus parse_pos_chunk(std::istream& in,
                       std::optional<Scheme> scheme_override = std::nullopt);
Corpus parse_pos_chunk(std::string_view text,
                       std::optional<Scheme> scheme_override = std::nullopt);
/// Throws IoError when the file cannot be opened.
Corpus read_pos_chunk_file(const std::string& path,
                           std::optional<Scheme> scheme_override = std::nullopt);

std::string write_pos_chunk(const Corpus& corpus);
void write_pos_chunk_file(const Corpus& corpus, const std::string& path);

/// Maximal chunks of one sentence in start order. Under IOB2 an I-X that
/// does not continue an X chunk is a ValidationError; IOB1 opens a new one.
std::vector<ChunkSpan> extract_chunks(const Sentence& sentence, Scheme scheme,
                                      std::size_t sentence_index = 0);
std::vector<ChunkSpan> extract_chunks(const Corpus& corpus);

/// Re-encodes the BIO column; chunk spans and everything else are preserved.
Corpus normalize_bio(const Corpus& corpus, Scheme target);

/// Sentence-level partition of 0..n-1. See split_corpus.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded shuffle (mt19937_64 + Fisher-Yates with rejection sampling), the
/// first round(fraction * n) shuffled indices go to train. Both parts are
/// returned in ascending corpus order.
SplitIndices split_indices(std::size_t n, double train_fraction,
                           std::uint64_t seed);

Corpus select_sentences(const Corpus& corpus,
                        const std::vector<std::size_t>& indices);

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus,
                                       double train_fraction,
                                       std::uint64_t seed);

}  // namespace jnkit

#endif  // JNKIT_CORPUS_HPP_
