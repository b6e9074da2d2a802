#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "dexdid/errors.hpp"

namespace dexdid {

// Unsigned 256-bit integer, little-endian limbs. Covers what ABI words need:
// hex round-trips, comparison, and a lossy conversion to double.
struct U256 {
  std::array<std::uint64_t, 4> limbs{0, 0, 0, 0};

  static U256 from_u64(std::uint64_t v) {
    U256 r;
    r.limbs[0] = v;
    return r;
  }

  static U256 from_u128(unsigned __int128 v) {
    U256 r;
    r.limbs[0] = static_cast<std::uint64_t>(v);
    r.limbs[1] = static_cast<std::uint64_t>(v >> 64);
    return r;
  }

  // Parses exactly 64 hex characters (one ABI word, no 0x prefix).
  static U256 from_hex_word(std::string_view hex) {
    if (hex.size() != 64) throw DecodeError("ABI word must be 64 hex chars, got " + std::to_string(hex.size()));
    U256 r;
    for (int limb = 0; limb < 4; ++limb) {
      std::uint64_t v = 0;
      // limb 3 holds the most significant 16 chars
      std::size_t off = static_cast<std::size_t>(3 - limb) * 16;
      for (std::size_t i = 0; i < 16; ++i) {
        char c = hex[off + i];
        std::uint64_t d;
        if (c >= '0' && c <= '9') d = static_cast<std::uint64_t>(c - '0');
        else if (c >= 'a' && c <= 'f') d = static_cast<std::uint64_t>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') d = static_cast<std::uint64_t>(c - 'A' + 10);
        else throw DecodeError(std::string("invalid hex character '") + c + "'");
        v = (v << 4) | d;
      }
      r.limbs[static_cast<std::size_t>(limb)] = v;
    }
    return r;
  }

  std::string to_hex_word() const {
    static const char* digits = "0123456789abcdef";
    std::string s(64, '0');
    for (int limb = 3; limb >= 0; --limb) {
      std::uint64_t v = limbs[static_cast<std::size_t>(limb)];
      std::size_t off = static_cast<std::size_t>(3 - limb) * 16;
      for (int i = 15; i >= 0; --i) {
        s[off + static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
      }
    }
    return s;
  }

  bool is_zero() const {
    return limbs[0] == 0 && limbs[1] == 0 && limbs[2] == 0 && limbs[3] == 0;
  }

  friend bool operator==(const U256& a, const U256& b) { return a.limbs == b.limbs; }
  friend bool operator<(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
      auto ai = a.limbs[static_cast<std::size_t>(i)], bi = b.limbs[static_cast<std::size_t>(i)];
      if (ai != bi) return ai < bi;
    }
    return false;
  }

  // Nearest-double conversion; exact for values below 2^53.
  double to_double() const {
    double r = 0.0;
    for (int i = 3; i >= 0; --i) r = r * 18446744073709551616.0 + static_cast<double>(limbs[static_cast<std::size_t>(i)]);
    return r;
  }
};

}  // namespace dexdid
