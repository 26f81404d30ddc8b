#ifndef JNKIT_ERRORS_HPP_
#define JNKIT_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jnkit {

/// Root of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad option value, unknown scheme, unmapped tag and similar caller mistakes.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid data: dangling references, illegal BIO sequences.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. line() is 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  /// Renders as "source:line: detail", or "line N: detail" without a source.
  ParseError(std::size_t line, const std::string& detail,
             const std::string& source = {})
      : Error(source.empty() ? "line " + std::to_string(line) + ": " + detail
                             : source + ":" + std::to_string(line) + ": " + detail),
        line_(line),
        detail_(detail) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// Gold and predicted corpora do not line up.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Model file that cannot be read back (bad version, truncated table).
class ModelLoadError : public Error {
 public:
  using Error::Error;
};

class ComparisonError : public Error {
 public:
  using Error::Error;
};

/// Cosine similarity requested for an empty distribution.
class UndefinedSimilarityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace jnkit

#endif  // JNKIT_ERRORS_HPP_
