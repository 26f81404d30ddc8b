#ifndef JNKIT_DIGEST_HPP_
#define JNKIT_DIGEST_HPP_

#include <string>
#include <string_view>

namespace jnkit {

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace jnkit

#endif  // JNKIT_DIGEST_HPP_
