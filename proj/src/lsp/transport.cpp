#include "coolio/lsp/transport.hpp"

#include <charconv>
#include <istream>
#include <ostream>

namespace coolio::lsp {

std::optional<Frame> read_frame(std::istream& in) {
  std::optional<std::size_t> length;
  bool malformed = false;
  bool any_header = false;
  std::string line;
  while (true) {
    if (!std::getline(in, line)) return std::nullopt;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!any_header) continue;  // stray blank line between frames
      break;
    }
    any_header = true;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      malformed = true;
      continue;
    }
    std::string_view name(line.data(), colon);
    std::string_view value(line.data() + colon + 1, line.size() - colon - 1);
    while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    if (name == "Content-Length") {
      std::size_t n = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc{} || ptr != value.data() + value.size()) {
        malformed = true;
      } else {
        length = n;
      }
    }
  }
  if (malformed || !length) return Frame{{}, true};
  Frame f;
  f.body.resize(*length);
  if (!in.read(f.body.data(), static_cast<std::streamsize>(*length))) return std::nullopt;
  return f;
}

std::string frame(std::string_view body) {
  std::string out = "Content-Length: " + std::to_string(body.size()) + "\r\n\r\n";
  out += body;
  return out;
}

void write_frame(std::ostream& out, std::string_view body) {
  out << frame(body);
  out.flush();
}

}  // namespace coolio::lsp
