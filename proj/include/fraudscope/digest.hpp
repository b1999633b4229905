#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace fraudscope {

// 64-bit FNV-1a. Used for stable element ids and change-detection digests,
// not for anything security related.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex_digest(std::string_view data) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(data)));
  return buf;
}

}  // namespace fraudscope
