#pragma once

#include <map>
#include <string>
#include <string_view>

#include "coolio/diagnostics.hpp"

namespace coolio::lsp {

struct Document {
  std::string text;
  long long version = 0;
  LineIndex index;
};

class DocumentStore {
 public:
  void open(const std::string& uri, std::string text, long long version);
  /// Replaces the text when `version` is newer than the stored one.
  /// Returns false (and changes nothing) for unknown URIs or stale versions.
  bool change(const std::string& uri, std::string text, long long version);
  /// Replaces the text without touching the version (save with text).
  bool sync_text(const std::string& uri, std::string text);
  void close(const std::string& uri);

  const Document* find(const std::string& uri) const;
  std::size_t size() const { return docs_.size(); }

 private:
  std::map<std::string, Document, std::less<>> docs_;
};

}  // namespace coolio::lsp
