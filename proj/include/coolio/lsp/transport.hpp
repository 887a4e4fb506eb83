#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace coolio::lsp {

struct Frame {
  std::string body;
  /// Set when the header block was unusable; `body` is then empty.
  bool malformed = false;
};

/// Reads one `Content-Length` framed message. Returns nullopt at end of
/// input, including input that ends inside a frame.
std::optional<Frame> read_frame(std::istream& in);

/// `Content-Length: <n>\r\n\r\n<body>`
std::string frame(std::string_view body);

void write_frame(std::ostream& out, std::string_view body);

}  // namespace coolio::lsp
