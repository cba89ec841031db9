#include "smactr/canonical.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace smactr {

std::string canonical_bytes(const json& value) {
  // nlohmann::json objects are std::map backed, so dump() already emits keys
  // in byte order; numbers use the shortest round-trip representation.
  return value.dump(-1, ' ', false, json::error_handler_t::strict);
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0f]);
  }
  return out;
}

}  // namespace smactr
