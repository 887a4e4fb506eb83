#include "coolio/assets.hpp"

#include <array>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace coolio {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::array<SnippetEntry, 8> kSnippets = {{
    {"COOL_class", "class", "class", {"class ${1:Name} {", "\t${0:body}", "};"},
     "COOL: class"},
    {"COOL_class_inherits",
     "class inherits",
     "class",
     {"class ${1:Name} inherits ${2:Object}{", "\t${0:body}", "};"},
     "COOL: class inherits"},
    {"COOL_method",
     "method",
     "method",
     {"${1:name}(${2:arg} : ${3:Int}) : ${4:Object} {", "\t${0:expression}", "};"},
     "COOL: method definition"},
    {"COOL_if", "if", "if", {"if ${1:condition} then ${2:expression} else ${3:expression} fi"},
     "COOL: if then else"},
    {"COOL_while", "while", "while", {"while ${1:condition} loop", "\t${0:expression}", "pool"},
     "COOL: while loop"},
    {"COOL_let", "let", "let", {"let ${1:var} : ${2:Int} <- ${3:value} in", "\t${0:expression}"},
     "COOL: let declaration"},
    {"COOL_case",
     "case",
     "case",
     {"case ${1:expression} of", "\t${2:name} : ${3:Type} => ${4:expression};", "esac"},
     "COOL: case"},
    {"COOL_block", "block", "block", {"{", "\t${0:expression};", "}"}, "COOL: block"},
}};

ordered_json rule(const char* match, const char* name) {
  ordered_json r;
  r["match"] = match;
  r["name"] = name;
  return r;
}

ordered_json grammar() {
  ordered_json g;
  g["name"] = "COOL";
  g["scopeName"] = "source.cool";
  g["fileTypes"] = {"cl"};

  ordered_json patterns = ordered_json::array();
  for (const char* key : {"line_comment", "block_comment", "string", "integer", "control",
                          "keyword", "boolean", "special", "class", "identifier", "operator"}) {
    patterns.push_back({{"include", std::string("#") + key}});
  }
  g["patterns"] = patterns;

  ordered_json repo;
  repo["line_comment"] = {{"begin", "--"}, {"end", "$\\n?"}, {"name", "comment.line.double-dash.cool"}};
  repo["block_comment"] = {{"begin", "\\(\\*"},
                           {"end", "\\*\\)"},
                           {"name", "comment.block.cool"},
                           {"patterns", {{{"include", "#block_comment"}}}}};
  repo["string"] = {{"begin", "\""},
                    {"end", "\""},
                    {"name", "string.quoted.double.cool"},
                    {"patterns", {rule("\\\\.", "constant.character.escape.cool")}}};
  repo["integer"] = rule("\\b(0|[1-9][0-9]*)\\b", "constant.numeric.integer.cool");
  repo["control"] = rule("(?i)\\b(if|then|else|fi|while|loop|pool|let|in|case|of|esac)\\b",
                         "keyword.control.cool");
  repo["keyword"] = rule("(?i)\\b(class|inherits|new|isvoid|not)\\b", "keyword.other.cool");
  repo["boolean"] = rule("\\b(t(?i:rue)|f(?i:alse))\\b", "constant.language.boolean.cool");
  repo["special"] = rule("\\b(self|SELF_TYPE)\\b", "variable.language.cool");
  repo["class"] = rule("\\b[A-Z][A-Za-z0-9_]*\\b", "entity.name.type.class.cool");
  repo["identifier"] = rule("\\b[a-z][A-Za-z0-9_]*\\b", "variable.other.cool");
  repo["operator"] = rule("<-|<=|=>|[-+*/~<=@.]", "keyword.operator.cool");
  g["repository"] = repo;
  return g;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::string SnippetEntry::body_text() const {
  std::string text;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) text += '\n';
    text += body[i];
  }
  return text;
}

std::span<const SnippetEntry> snippet_table() { return kSnippets; }

std::string grammar_json() { return grammar().dump(2) + "\n"; }

std::string snippets_json() {
  ordered_json doc = ordered_json::object();
  for (const auto& s : kSnippets) {
    doc[s.key] = {{"prefix", s.prefix}, {"body", s.body}, {"description", s.description}};
  }
  return doc.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_assets(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error("not a directory: " + dir.string());
  }
  const auto grammar_path = dir / kGrammarFileName;
  const auto snippets_path = dir / kSnippetsFileName;
  write_file(grammar_path, grammar_json());
  write_file(snippets_path, snippets_json());
  return {grammar_path, snippets_path};
}

}  // namespace coolio
