// Copyright 2026 The StreamForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string_view>
#include <type_traits>

namespace streamforge {

namespace detail {

/// Little-endian load of 8 bytes.
constexpr std::uint64_t loadLe64(const char* p) noexcept {
  if (!std::is_constant_evaluated() && std::endian::native == std::endian::little) {
    std::uint64_t w;
    std::memcpy(&w, p, sizeof w);
    return w;
  }
  std::uint64_t w = 0;
  for (int b = 7; b >= 0; --b) w = (w << 8) | static_cast<unsigned char>(p[b]);
  return w;
}

}  // namespace detail

/// Stable 64-bit hash of a byte string. The value depends only on the bytes,
/// never on the platform or process, so key-grouped routing is reproducible.
constexpr std::uint64_t stableHash64(std::string_view bytes) noexcept {
  constexpr std::uint64_t kMul = 0x9E3779B97F4A7C15ULL;
  std::uint64_t h = 0x243F6A8885A308D3ULL ^ (bytes.size() * kMul);
  std::size_t i = 0;
  for (; i + 8 <= bytes.size(); i += 8) {
    h = (h ^ detail::loadLe64(bytes.data() + i)) * kMul;
    h ^= h >> 29;
  }
  std::uint64_t tail = 0;
  for (std::size_t j = bytes.size(); j > i; --j) {
    tail = (tail << 8) | static_cast<unsigned char>(bytes[j - 1]);
  }
  h = (h ^ tail) * kMul;
  // murmur3 finalizer
  h ^= h >> 33;
  h *= 0xFF51AFD7ED558CCDULL;
  h ^= h >> 33;
  h *= 0xC4CEB9FE1A85EC53ULL;
  h ^= h >> 33;
  return h;
}

}  // namespace streamforge
