#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "coolio/diagnostics.hpp"
#include "coolio/lsp/document_store.hpp"
#include "json.hpp"

namespace coolio::lsp {

namespace error_code {
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;
inline constexpr int kServerNotInitialized = -32002;
}  // namespace error_code

/// Protocol state machine without any I/O. Feed it decoded messages and
/// send whatever it returns, in order.
class Server {
 public:
  std::vector<nlohmann::json> handle(const nlohmann::json& message);
  /// For a body that failed to parse as JSON.
  std::vector<nlohmann::json> handle_unparsable();

  /// Set once `exit` has been received.
  std::optional<int> exit_code() const { return exit_code_; }
  const DocumentStore& documents() const { return store_; }
  PositionEncoding encoding() const { return encoding_; }

 private:
  nlohmann::json initialize(const nlohmann::json& params);
  nlohmann::json publish(const std::string& uri);
  nlohmann::json complete(const nlohmann::json& params) const;

  DocumentStore store_;
  PositionEncoding encoding_ = PositionEncoding::Utf16;
  bool initialized_ = false;
  bool shutdown_ = false;
  std::optional<int> exit_code_;
};

/// Wire protocol range for a diagnostic: its span when that stays on one
/// line, otherwise the whole line. Lines are 0-based here.
nlohmann::json diagnostic_range(const Diagnostic& d, const LineIndex& index,
                                PositionEncoding encoding);

/// Runs the server loop until `exit` or end of input. Returns the process
/// exit status: 0 after shutdown then exit, 1 otherwise.
int serve(std::istream& in, std::ostream& out);

}  // namespace coolio::lsp
