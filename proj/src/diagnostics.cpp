#include "coolio/diagnostics.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "utf8.hpp"

namespace coolio {

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::Lexing:
      return "lexing";
    case Phase::Parsing:
      return "parsing";
    case Phase::Typechecking:
      return "typechecking";
    case Phase::Evaluation:
      return "evaluation";
  }
  return "unknown";
}

std::string format_diagnostic(const Diagnostic& diagnostic) {
  std::ostringstream out;
  out << "ERROR: " << diagnostic.line << ": " << phase_name(diagnostic.phase) << ": "
      << diagnostic.message;
  return out.str();
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::tie(a.line, a.phase, a.message) <
                            std::tie(b.line, b.phase, b.message);
                   });
}

LineIndex::LineIndex(std::string_view document)
    : text_(document), document_length_(document.size()) {
  std::size_t start = 0;
  while (true) {
    const std::size_t newline = text_.find('\n', start);
    const std::size_t end = newline == std::string::npos ? text_.size() : newline;
    Line line;
    line.byte_start = start;
    line.byte_length = end - start;
    if (line.byte_length > 0 && text_[end - 1] == '\r') --line.byte_length;
    for (std::size_t pos = start; pos < start + line.byte_length;) {
      const std::size_t len = utf8::sequence_length(text_, pos);
      line.utf16_length += utf8::utf16_units(len);
      pos += len;
    }
    lines_.push_back(line);
    if (newline == std::string::npos) break;
    start = newline + 1;
  }
}

std::vector<std::size_t> LineIndex::line_starts() const {
  std::vector<std::size_t> starts;
  starts.reserve(lines_.size());
  for (const auto& line : lines_) starts.push_back(line.byte_start);
  return starts;
}

TextPosition LineIndex::position_of(std::size_t byte_offset, PositionEncoding encoding) const {
  byte_offset = std::min(byte_offset, document_length_);
  auto it = std::upper_bound(lines_.begin(), lines_.end(), byte_offset,
                             [](std::size_t offset, const Line& l) { return offset < l.byte_start; });
  const auto line_number = static_cast<std::size_t>(std::distance(lines_.begin(), it)) - 1;
  const Line& line = lines_[line_number];
  const std::size_t column_bytes = std::min(byte_offset - line.byte_start, line.byte_length);
  std::size_t character = column_bytes;
  if (encoding == PositionEncoding::Utf16) {
    character = 0;
    for (std::size_t pos = line.byte_start; pos < line.byte_start + column_bytes;) {
      const std::size_t len = utf8::sequence_length(text_, pos);
      character += utf8::utf16_units(len);
      pos += len;
    }
  }
  return TextPosition{static_cast<int>(line_number) + 1, static_cast<int>(character)};
}

std::optional<std::size_t> LineIndex::offset_of(std::size_t zero_based_line, std::size_t character,
                                                PositionEncoding encoding) const {
  if (zero_based_line >= lines_.size()) return std::nullopt;
  const Line& line = lines_[zero_based_line];
  if (encoding == PositionEncoding::Utf8) {
    if (character > line.byte_length) return std::nullopt;
    return line.byte_start + character;
  }
  if (character > line.utf16_length) return std::nullopt;
  std::size_t units = 0;
  std::size_t pos = line.byte_start;
  const std::size_t end = line.byte_start + line.byte_length;
  while (pos < end && units < character) {
    const std::size_t len = utf8::sequence_length(text_, pos);
    units += utf8::utf16_units(len);
    pos += len;
  }
  return pos;
}

LineIndex build_line_index(std::string_view document) { return LineIndex(document); }

TextRange line_to_range(const LineIndex& index, int line, PositionEncoding encoding) {
  const auto count = static_cast<int>(index.line_count());
  const int clamped = std::clamp(line, 1, count);
  const auto& extent = index.line(static_cast<std::size_t>(clamped - 1));
  const std::size_t length =
      encoding == PositionEncoding::Utf16 ? extent.utf16_length : extent.byte_length;
  return TextRange{TextPosition{clamped, 0}, TextPosition{clamped, static_cast<int>(length)}};
}

}  // namespace coolio
