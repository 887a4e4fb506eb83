#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coolio/source_span.hpp"

namespace coolio {

/// Compiler phase that produced a diagnostic. Declaration order is the
/// sort order used when diagnostics from several phases are merged.
enum class Phase { Lexing, Parsing, Typechecking, Evaluation };

std::string_view phase_name(Phase phase);

/// Only Error is produced today; Warning exists so the wire mapping has a
/// stable slot for it.
enum class Severity { Error, Warning };

/// A position inside a document: 1-based line, 0-based character.
/// The character unit depends on the encoding used to compute it.
struct TextPosition {
  int line = 1;
  int character = 0;

  friend bool operator==(const TextPosition&, const TextPosition&) = default;
};

struct TextRange {
  TextPosition start;
  TextPosition end;

  friend bool operator==(const TextRange&, const TextRange&) = default;
};

struct Diagnostic {
  Phase phase = Phase::Lexing;
  int line = 1;
  std::string message;
  /// Offending source extent, when the phase knows one.
  std::optional<SourceSpan> span;
  /// Protocol range; filled in when the diagnostic is published.
  std::optional<TextRange> range;
  Severity severity = Severity::Error;
};

/// `ERROR: <line>: <phase>: <message>`
std::string format_diagnostic(const Diagnostic& diagnostic);

/// Stable sort by (line, phase, message).
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

enum class PositionEncoding { Utf16, Utf8 };

/// Line table for one document. Lines are separated by '\n'; a trailing
/// newline yields a final empty line. For each line both the byte extent
/// and the UTF-16 length are kept so protocol positions can be produced
/// in either encoding.
class LineIndex {
 public:
  struct Line {
    std::size_t byte_start = 0;
    std::size_t byte_length = 0;  // excludes '\n' and a trailing '\r'
    std::size_t utf16_length = 0;
  };

  LineIndex() : LineIndex(std::string_view{}) {}
  explicit LineIndex(std::string_view document);

  std::size_t line_count() const { return lines_.size(); }
  std::size_t document_length() const { return document_length_; }
  const Line& line(std::size_t zero_based) const { return lines_[zero_based]; }

  /// Byte offset of the start of each line.
  std::vector<std::size_t> line_starts() const;

  /// Converts a byte offset to a position. Offsets past the end clamp to
  /// the end of the document.
  TextPosition position_of(std::size_t byte_offset,
                           PositionEncoding encoding = PositionEncoding::Utf16) const;

  /// Converts a 0-based protocol position back to a byte offset, or
  /// nullopt when the line does not exist or the character is past the
  /// line's end.
  std::optional<std::size_t> offset_of(std::size_t zero_based_line, std::size_t character,
                                       PositionEncoding encoding = PositionEncoding::Utf16) const;

 private:
  std::string text_;
  std::vector<Line> lines_;
  std::size_t document_length_ = 0;
};

LineIndex build_line_index(std::string_view document);

/// Full extent of a 1-based line; lines beyond the document clamp to the
/// last line and lines below 1 clamp to the first.
TextRange line_to_range(const LineIndex& index, int line,
                        PositionEncoding encoding = PositionEncoding::Utf16);

}  // namespace coolio
