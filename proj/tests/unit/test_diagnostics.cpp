#include <algorithm>
#include <map>
#include <tuple>

#include "coolio/diagnostics.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace coolio;

TEST_CASE("format_diagnostic uses the fixed CLI layout") {
  CHECK(format_diagnostic({Phase::Typechecking, 2, "String does not conform to Int", {}, {}}) ==
        "ERROR: 2: typechecking: String does not conform to Int");
  CHECK(format_diagnostic({Phase::Lexing, 1, "unterminated string", {}, {}}) ==
        "ERROR: 1: lexing: unterminated string");
  CHECK(format_diagnostic({Phase::Evaluation, 7, "division by zero", {}, {}}) ==
        "ERROR: 7: evaluation: division by zero");
  CHECK(format_diagnostic({Phase::Parsing, 3, "x", {}, {}}) == "ERROR: 3: parsing: x");
}

TEST_CASE("line starts") {
  CHECK(build_line_index("a\nbb\n").line_starts() == std::vector<std::size_t>{0, 2, 5});
  CHECK(build_line_index("").line_starts() == std::vector<std::size_t>{0});
  CHECK(build_line_index("abc").line_starts() == std::vector<std::size_t>{0});
  CHECK(build_line_index("\n\n").line_starts() == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("line_to_range covers one line and clamps") {
  const LineIndex two = build_line_index("a\nbb\n");
  CHECK(line_to_range(two, 2) == TextRange{{2, 0}, {2, 2}});
  const LineIndex one = build_line_index("a");
  CHECK(line_to_range(one, 1) == TextRange{{1, 0}, {1, 1}});
  CHECK(line_to_range(one, 99) == TextRange{{1, 0}, {1, 1}});
  CHECK(line_to_range(one, 0) == TextRange{{1, 0}, {1, 1}});
}

TEST_CASE("line_to_range counts UTF-16 units or bytes") {
  // é is 2 bytes / 1 unit, € 3 bytes / 1 unit, 😀 4 bytes / 2 units.
  const LineIndex idx = build_line_index("x\né€😀\r\ny");
  CHECK(line_to_range(idx, 2, PositionEncoding::Utf16) == TextRange{{2, 0}, {2, 4}});
  CHECK(line_to_range(idx, 2, PositionEncoding::Utf8) == TextRange{{2, 0}, {2, 9}});
  CHECK(idx.position_of(idx.line(1).byte_start + 5) == TextPosition{2, 2});
  CHECK(idx.offset_of(1, 2) == idx.line(1).byte_start + 5);
  CHECK_FALSE(idx.offset_of(1, 5).has_value());
  CHECK_FALSE(idx.offset_of(7, 0).has_value());
}

TEST_CASE("diagnostics sort by line, phase, message") {
  std::vector<Diagnostic> ds = {{Phase::Typechecking, 2, "b", {}, {}},
                                {Phase::Parsing, 2, "z", {}, {}},
                                {Phase::Typechecking, 2, "a", {}, {}},
                                {Phase::Evaluation, 1, "q", {}, {}}};
  sort_diagnostics(ds);
  CHECK(ds[0].message == "q");
  CHECK(ds[1].message == "z");
  CHECK(ds[2].message == "a");
  CHECK(ds[3].message == "b");
}

TEST_CASE("property: line index entries and ranges stay inside the document") {
  testsupport::Rng rng(20240611);
  for (int iter = 0; iter < 2000; ++iter) {
    const std::string doc = testsupport::random_text(rng, 120);
    const LineIndex idx = build_line_index(doc);
    const auto starts = idx.line_starts();
    REQUIRE(idx.line_count() ==
            static_cast<std::size_t>(std::count(doc.begin(), doc.end(), '\n')) + 1);
    REQUIRE(starts.front() == 0);
    for (std::size_t i = 1; i < starts.size(); ++i) REQUIRE(starts[i] > starts[i - 1]);
    for (auto enc : {PositionEncoding::Utf16, PositionEncoding::Utf8}) {
      const int line = static_cast<int>(rng.between(-3, static_cast<std::int64_t>(idx.line_count()) + 3));
      const TextRange r = line_to_range(idx, line, enc);
      REQUIRE(r.start.line >= 1);
      REQUIRE(r.start.line == r.end.line);
      REQUIRE(static_cast<std::size_t>(r.start.line) <= idx.line_count());
      const auto& l = idx.line(static_cast<std::size_t>(r.start.line - 1));
      const std::size_t width = enc == PositionEncoding::Utf16 ? l.utf16_length : l.byte_length;
      REQUIRE(r.start.character == 0);
      REQUIRE(static_cast<std::size_t>(r.end.character) == width);
    }
  }
}

TEST_CASE("property: format_diagnostic is injective") {
  testsupport::Rng rng(7);
  std::map<std::string, std::tuple<int, int, std::string>> seen;
  const std::vector<std::string> words = {"a", "b", ":", " ", "1", "ERROR", "lexing: x", ": 2"};
  for (int iter = 0; iter < 5000; ++iter) {
    const int line = static_cast<int>(rng.between(1, 30));
    const int phase = static_cast<int>(rng.between(0, 3));
    std::string msg;
    for (auto n = rng.between(0, 3); n > 0; --n) msg += rng.pick(words);
    const auto key = std::make_tuple(line, phase, msg);
    const std::string text = format_diagnostic({static_cast<Phase>(phase), line, msg, {}, {}});
    auto [it, inserted] = seen.emplace(text, key);
    REQUIRE(it->second == key);
  }
}
