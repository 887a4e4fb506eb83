#pragma once

#include <cstddef>

namespace coolio {

/// Half-open byte range [start_offset, end_offset) into the source text,
/// plus the 1-based line and column (in bytes) of its first character.
struct SourceSpan {
  std::size_t start_offset = 0;
  std::size_t end_offset = 0;
  int line = 1;
  int column = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Covering span of two spans, `first` preceding `last`.
inline SourceSpan merge_spans(const SourceSpan& first, const SourceSpan& last) {
  SourceSpan merged = first;
  if (last.end_offset > merged.end_offset) merged.end_offset = last.end_offset;
  return merged;
}

}  // namespace coolio
