#include "coolio/lsp/server.hpp"

#include <istream>
#include <ostream>

#include "coolio/assets.hpp"
#include "coolio/lsp/transport.hpp"
#include "coolio/semantics.hpp"

namespace coolio::lsp {

using nlohmann::json;

namespace {

json response(const json& id, json result) {
  return {{"jsonrpc", "2.0"}, {"id", id}, {"result", std::move(result)}};
}

json error_response(const json& id, int code, std::string message) {
  return {{"jsonrpc", "2.0"},
          {"id", id},
          {"error", {{"code", code}, {"message", std::move(message)}}}};
}

json position(const TextPosition& p) { return {{"line", p.line - 1}, {"character", p.character}}; }

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

json diagnostic_range(const Diagnostic& d, const LineIndex& index, PositionEncoding encoding) {
  if (d.span) {
    const TextPosition start = index.position_of(d.span->start_offset, encoding);
    const TextPosition end = index.position_of(d.span->end_offset, encoding);
    if (start.line == end.line && start.line == d.line) {
      return {{"start", position(start)}, {"end", position(end)}};
    }
  }
  const TextRange r = line_to_range(index, d.line, encoding);
  return {{"start", position(r.start)}, {"end", position(r.end)}};
}

json Server::initialize(const json& params) {
  encoding_ = PositionEncoding::Utf16;
  const json* offered = nullptr;
  if (params.is_object()) {
    auto caps = params.find("capabilities");
    if (caps != params.end() && caps->is_object()) {
      auto general = caps->find("general");
      if (general != caps->end() && general->is_object()) {
        auto enc = general->find("positionEncodings");
        if (enc != general->end() && enc->is_array()) offered = &*enc;
      }
    }
  }
  if (offered) {
    for (const auto& e : *offered) {
      if (e == "utf-8") encoding_ = PositionEncoding::Utf8;
    }
  }

  json triggers = json::array();
  for (char c = 'a'; c <= 'z'; ++c) triggers.push_back(std::string(1, c));
  for (char c = 'A'; c <= 'Z'; ++c) triggers.push_back(std::string(1, c));
  triggers.push_back("_");

  json caps = {
      {"positionEncoding", encoding_ == PositionEncoding::Utf8 ? "utf-8" : "utf-16"},
      {"textDocumentSync",
       {{"openClose", true}, {"change", 1}, {"save", {{"includeText", true}}}}},
      {"completionProvider", {{"triggerCharacters", triggers}, {"resolveProvider", false}}},
  };
  return {{"capabilities", caps}, {"serverInfo", {{"name", "coolio"}, {"version", "0.1.0"}}}};
}

json Server::publish(const std::string& uri) {
  const Document* doc = store_.find(uri);
  json diagnostics = json::array();
  FrontendResult analysis = analyze_source(doc->text);
  for (const auto& d : analysis.diagnostics) {
    diagnostics.push_back({{"range", diagnostic_range(d, doc->index, encoding_)},
                           {"severity", d.severity == Severity::Error ? 1 : 2},
                           {"source", "coolio"},
                           {"code", std::string(phase_name(d.phase))},
                           {"message", d.message}});
  }
  return {{"jsonrpc", "2.0"},
          {"method", "textDocument/publishDiagnostics"},
          {"params", {{"uri", uri}, {"version", doc->version}, {"diagnostics", diagnostics}}}};
}

json Server::complete(const json& params) const {
  json items = json::array();
  const Document* doc = store_.find(params.at("textDocument").at("uri").get<std::string>());
  if (!doc) return items;
  const auto& pos = params.at("position");
  const auto line = pos.at("line").get<long long>();
  const auto character = pos.at("character").get<long long>();
  if (line < 0 || character < 0) return items;
  auto offset = doc->index.offset_of(static_cast<std::size_t>(line),
                                     static_cast<std::size_t>(character), encoding_);
  if (!offset) return items;
  std::size_t start = *offset;
  while (start > 0 && is_word_char(doc->text[start - 1])) --start;
  const std::string word = doc->text.substr(start, *offset - start);
  for (const auto& s : snippet_table()) {
    if (!s.prefix.starts_with(word)) continue;
    items.push_back({{"label", s.label},
                     {"kind", 15},
                     {"detail", s.description},
                     {"documentation", s.description},
                     {"filterText", s.prefix},
                     {"insertText", s.body_text()},
                     {"insertTextFormat", 2}});
  }
  return items;
}

std::vector<json> Server::handle_unparsable() {
  return {error_response(nullptr, error_code::kParseError, "parse error")};
}

std::vector<json> Server::handle(const json& message) {
  if (!message.is_object() || !message.contains("method") || !message["method"].is_string()) {
    if (message.is_object() && message.contains("id")) {
      return {error_response(message["id"], error_code::kInvalidRequest, "invalid request")};
    }
    return {error_response(nullptr, error_code::kInvalidRequest, "invalid request")};
  }
  const std::string method = message["method"];
  const bool is_request = message.contains("id");
  const json id = is_request ? message["id"] : json();
  const json params = message.value("params", json::object());

  if (method == "exit") {
    exit_code_ = shutdown_ ? 0 : 1;
    return {};
  }
  if (!initialized_ && method != "initialize") {
    if (is_request) {
      return {error_response(id, error_code::kServerNotInitialized, "server not initialized")};
    }
    return {};
  }
  if (shutdown_) {
    if (is_request) return {error_response(id, error_code::kInvalidRequest, "server is shut down")};
    return {};
  }

  try {
    if (method == "initialize") {
      if (initialized_) {
        return {error_response(id, error_code::kInvalidRequest, "already initialized")};
      }
      initialized_ = true;
      return {response(id, initialize(params))};
    }
    if (method == "initialized") return {};
    if (method == "shutdown") {
      shutdown_ = true;
      return {response(id, nullptr)};
    }
    if (method == "textDocument/didOpen") {
      const auto& td = params.at("textDocument");
      const std::string uri = td.at("uri");
      store_.open(uri, td.at("text").get<std::string>(), td.value("version", 0LL));
      return {publish(uri)};
    }
    if (method == "textDocument/didChange") {
      const auto& td = params.at("textDocument");
      const auto& changes = params.at("contentChanges");
      if (changes.is_array() && !changes.empty()) {
        store_.change(td.at("uri").get<std::string>(),
                      changes.back().at("text").get<std::string>(), td.at("version").get<long long>());
      }
      return {};
    }
    if (method == "textDocument/didSave") {
      const std::string uri = params.at("textDocument").at("uri");
      if (!store_.find(uri)) return {};
      if (params.contains("text") && params["text"].is_string()) {
        store_.sync_text(uri, params["text"].get<std::string>());
      }
      return {publish(uri)};
    }
    if (method == "textDocument/didClose") {
      store_.close(params.at("textDocument").at("uri").get<std::string>());
      return {};
    }
    if (method == "textDocument/completion") return {response(id, complete(params))};
  } catch (const json::exception& e) {
    if (is_request) return {error_response(id, error_code::kInvalidParams, e.what())};
    return {};
  }

  if (is_request) {
    return {error_response(id, error_code::kMethodNotFound, "method not found: " + method)};
  }
  return {};
}

int serve(std::istream& in, std::ostream& out) {
  Server server;
  while (auto f = read_frame(in)) {
    std::vector<json> replies;
    if (f->malformed) {
      replies = server.handle_unparsable();
    } else {
      json message = json::parse(f->body, nullptr, false);
      replies = message.is_discarded() ? server.handle_unparsable() : server.handle(message);
    }
    for (const auto& r : replies) write_frame(out, r.dump(-1, ' ', false, json::error_handler_t::replace));
    if (server.exit_code()) return *server.exit_code();
  }
  return 1;
}

}  // namespace coolio::lsp
