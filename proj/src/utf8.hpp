#pragma once

#include <cstddef>
#include <string_view>

namespace coolio::utf8 {

/// Byte length of the UTF-8 sequence starting at `text[pos]`. Malformed or
/// truncated sequences count as a single byte so scanning always advances.
inline std::size_t sequence_length(std::string_view text, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  std::size_t expected = 1;
  if (lead >= 0xF0 && lead <= 0xF4) {
    expected = 4;
  } else if (lead >= 0xE0) {
    expected = lead <= 0xEF ? 3 : 1;
  } else if (lead >= 0xC2) {
    expected = 2;
  }
  if (pos + expected > text.size()) return 1;
  for (std::size_t i = 1; i < expected; ++i) {
    if ((static_cast<unsigned char>(text[pos + i]) & 0xC0) != 0x80) return 1;
  }
  return expected;
}

/// Number of UTF-16 code units for a sequence of the given byte length.
inline std::size_t utf16_units(std::size_t sequence_bytes) { return sequence_bytes == 4 ? 2 : 1; }

}  // namespace coolio::utf8
