#include "coolio/lsp/document_store.hpp"

namespace coolio::lsp {

void DocumentStore::open(const std::string& uri, std::string text, long long version) {
  LineIndex index(text);
  docs_[uri] = Document{std::move(text), version, std::move(index)};
}

bool DocumentStore::change(const std::string& uri, std::string text, long long version) {
  auto it = docs_.find(uri);
  if (it == docs_.end() || version <= it->second.version) return false;
  it->second.index = LineIndex(text);
  it->second.text = std::move(text);
  it->second.version = version;
  return true;
}

bool DocumentStore::sync_text(const std::string& uri, std::string text) {
  auto it = docs_.find(uri);
  if (it == docs_.end()) return false;
  it->second.index = LineIndex(text);
  it->second.text = std::move(text);
  return true;
}

void DocumentStore::close(const std::string& uri) { docs_.erase(uri); }

const Document* DocumentStore::find(const std::string& uri) const {
  auto it = docs_.find(uri);
  return it == docs_.end() ? nullptr : &it->second;
}

}  // namespace coolio::lsp
