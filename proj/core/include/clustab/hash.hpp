#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace clustab {

/// FNV-1a 64-bit; used for config hashes and report integrity tags (tamper
/// evidence, not cryptography).
constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value);

}  // namespace clustab
