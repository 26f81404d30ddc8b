#ifndef JNKIT_TEXT_HPP_
#define JNKIT_TEXT_HPP_

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace jnkit {

std::vector<std::string_view> split_view(std::string_view text, char sep);
std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Comma-separated tag list to a set; empty items are dropped.
std::set<std::string> parse_tag_set(std::string_view text);
std::string format_tag_set(const std::set<std::string>& tags);

/// Round-trippable decimal, 17 significant digits; "-inf"/"inf"/"nan".
std::string format_g17(double value);
/// Fixed-point with `digits` decimals.
std::string format_fixed(double value, int digits);
/// Strict full-string parses; throw ConfigError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);

std::string to_lower_ascii(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace jnkit

#endif  // JNKIT_TEXT_HPP_
