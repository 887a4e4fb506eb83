#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace coolio {

/// One completion snippet. `body` holds one entry per line and uses
/// `${n:default}` tab stops, with `${0:...}` marking the final cursor.
struct SnippetEntry {
  std::string key;  // object key in the snippets file
  std::string label;
  std::string prefix;
  std::vector<std::string> body;
  std::string description;

  /// Body lines joined with '\n'.
  std::string body_text() const;
};

std::span<const SnippetEntry> snippet_table();

inline constexpr const char* kGrammarFileName = "cool.tmLanguage.json";
inline constexpr const char* kSnippetsFileName = "cool.code-snippets.json";

/// TextMate grammar, serialized with a fixed key order.
std::string grammar_json();
/// Snippets file in the editor's snippet format.
std::string snippets_json();

/// Writes both files into `dir`. Throws std::runtime_error when a file
/// cannot be written.
std::vector<std::filesystem::path> emit_assets(const std::filesystem::path& dir);

}  // namespace coolio
