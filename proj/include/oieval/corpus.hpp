#pragma once

// Tokens, entities, documents and corpora; IOB2 reading and writing.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oieval/text.hpp"

namespace oieval {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  /// 1-based line number of the offending line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input/config failure while assembling a corpus (missing files, orphans, ...).
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// IOB2 tag: O, B-<category> or I-<category>.
class Tag {
 public:
  enum class Kind { Outside, Begin, Inside };

  Tag() = default;
  static Tag outside() { return Tag{}; }
  static Tag begin(std::string category) { return Tag{Kind::Begin, std::move(category)}; }
  static Tag inside(std::string category) { return Tag{Kind::Inside, std::move(category)}; }

  /// Parses the exact IOB2 grammar; returns false on any deviation.
  static bool try_parse(std::string_view s, Tag& out) {
    if (s == "O") {
      out = outside();
      return true;
    }
    if (s.size() < 3 || s[1] != '-') return false;
    const std::string_view category = s.substr(2);
    if (contains_whitespace(category)) return false;
    if (s[0] == 'B') {
      out = begin(std::string(category));
      return true;
    }
    if (s[0] == 'I') {
      out = inside(std::string(category));
      return true;
    }
    return false;
  }

  Kind kind() const noexcept { return kind_; }
  const std::string& category() const noexcept { return category_; }

  std::string str() const {
    switch (kind_) {
      case Kind::Begin: return "B-" + category_;
      case Kind::Inside: return "I-" + category_;
      case Kind::Outside: break;
    }
    return "O";
  }

  friend bool operator==(const Tag&, const Tag&) = default;

 private:
  Tag(Kind kind, std::string category) : kind_(kind), category_(std::move(category)) {
    if (category_.empty()) throw std::invalid_argument("IOB2 tag with empty category");
  }

  Kind kind_ = Kind::Outside;
  std::string category_;
};

struct Token {
  std::string text;
  Tag tag;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Half-open token index range [begin, end) in the source document.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend auto operator<=>(const TokenSpan&, const TokenSpan&) = default;
};

struct TaggedEntity {
  std::string category;
  std::string transcription;  // member tokens joined by single spaces
  TokenSpan source_span;

  friend bool operator==(const TaggedEntity&, const TaggedEntity&) = default;
};

struct EntitySequence {
  std::vector<TaggedEntity> entities;
  /// Stray I- tags that opened a new entity.
  std::size_t repaired_tags = 0;

  std::size_t size() const noexcept { return entities.size(); }
  bool empty() const noexcept { return entities.empty(); }
  const TaggedEntity& operator[](std::size_t i) const { return entities[i]; }
  auto begin() const noexcept { return entities.begin(); }
  auto end() const noexcept { return entities.end(); }
};

/// Segments a token sequence into entity blocks. B-X opens an entity, I-X of
/// the same category extends it, O closes it. A stray I-X (no open entity, or
/// an open entity of another category) opens a new entity of category X.
inline EntitySequence extract_entities(const std::vector<Token>& tokens) {
  EntitySequence seq;
  bool open = false;
  auto close = [&](std::size_t end) {
    if (open) seq.entities.back().source_span.end = end;
    open = false;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& token = tokens[i];
    switch (token.tag.kind()) {
      case Tag::Kind::Outside:
        close(i);
        break;
      case Tag::Kind::Inside:
        if (open && seq.entities.back().category == token.tag.category()) {
          seq.entities.back().transcription += ' ';
          seq.entities.back().transcription += token.text;
          break;
        }
        ++seq.repaired_tags;
        [[fallthrough]];
      case Tag::Kind::Begin:
        close(i);
        seq.entities.push_back({token.tag.category(), token.text, {i, i}});
        open = true;
        break;
    }
  }
  close(tokens.size());
  return seq;
}

struct Document {
  std::string id;
  std::vector<Token> tokens;

  EntitySequence entities() const { return extract_entities(tokens); }

  /// All token texts joined by single spaces (tags stripped).
  std::string text() const {
    std::string out;
    for (const Token& t : tokens) {
      if (!out.empty()) out += ' ';
      out += t.text;
    }
    return out;
  }

  friend bool operator==(const Document&, const Document&) = default;
};

inline EntitySequence extract_entities(const Document& doc) { return extract_entities(doc.tokens); }

struct DocumentPair {
  Document reference;
  Document hypothesis;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<DocumentPair> pairs) : pairs_(std::move(pairs)) {
    std::set<std::string_view> seen;
    for (const DocumentPair& p : pairs_) {
      if (p.reference.id != p.hypothesis.id)
        throw LoadError("document pair id mismatch: '" + p.reference.id + "' vs '" +
                        p.hypothesis.id + "'");
      if (!seen.insert(p.reference.id).second)
        throw LoadError("duplicate document id '" + p.reference.id + "'");
    }
  }

  const std::vector<DocumentPair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  auto begin() const noexcept { return pairs_.begin(); }
  auto end() const noexcept { return pairs_.end(); }

 private:
  std::vector<DocumentPair> pairs_;
};

namespace detail {

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

template <typename Fn>
void for_each_line(std::string_view content, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    fn(strip_cr(content.substr(pos, nl - pos)), ++line_no);
    pos = nl + 1;
  }
}

inline Token parse_line(std::string_view line, std::size_t line_no) {
  const std::size_t sep = line.find(' ');
  if (sep == std::string_view::npos)
    throw ParseError("expected \"token tag\", found one field", line_no);
  if (line.find(' ', sep + 1) != std::string_view::npos)
    throw ParseError("expected exactly one space between token and tag", line_no);
  const std::string_view text = line.substr(0, sep);
  const std::string_view tag_text = line.substr(sep + 1);
  if (text.empty()) throw ParseError("empty token", line_no);
  try {
    if (contains_whitespace(text)) throw ParseError("token contains whitespace", line_no);
  } catch (const Utf8Error& e) {
    throw ParseError(e.what(), line_no);
  }
  Tag tag;
  if (!Tag::try_parse(tag_text, tag))
    throw ParseError("tag '" + std::string(tag_text) + "' is not valid IOB2", line_no);
  return Token{std::string(text), std::move(tag)};
}

}  // namespace detail

/// Parses one IOB2 document: one "token tag" per line, LF or CRLF, blank lines ignored.
inline Document parse_iob2(std::string_view content, std::string doc_id) {
  Document doc{std::move(doc_id), {}};
  detail::for_each_line(content, [&](std::string_view line, std::size_t line_no) {
    if (detail::is_blank(line)) return;
    if (!is_valid_utf8(line)) throw ParseError("invalid UTF-8", line_no);
    doc.tokens.push_back(detail::parse_line(line, line_no));
  });
  return doc;
}

/// Parses a file holding several documents separated by blank lines. Ids are
/// the zero-based block index.
inline std::vector<Document> parse_iob2_blocks(std::string_view content) {
  std::vector<Document> docs;
  bool in_block = false;
  detail::for_each_line(content, [&](std::string_view line, std::size_t line_no) {
    if (detail::is_blank(line)) {
      in_block = false;
      return;
    }
    if (!in_block) {
      docs.push_back(Document{std::to_string(docs.size()), {}});
      in_block = true;
    }
    if (!is_valid_utf8(line)) throw ParseError("invalid UTF-8", line_no);
    docs.back().tokens.push_back(detail::parse_line(line, line_no));
  });
  return docs;
}

/// Lines "token tag" joined by LF, no trailing newline.
inline std::string serialize_iob2(const Document& doc) {
  std::string out;
  for (const Token& t : doc.tokens) {
    if (!out.empty()) out += '\n';
    out += t.text;
    out += ' ';
    out += t.tag.str();
  }
  return out;
}

inline std::string serialize_iob2_blocks(const std::vector<Document>& docs) {
  std::string out;
  for (const Document& d : docs) {
    if (!out.empty()) out += "\n\n";
    out += serialize_iob2(d);
  }
  return out;
}

enum class InputMode { Directory, SingleFile };

struct LoadOptions {
  /// Apply Unicode NFC to every token on both sides.
  bool nfc = false;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

namespace detail {

inline void normalize_tokens(Document& doc) {
  for (Token& t : doc.tokens) t.text = normalize_nfc(t.text);
}

inline Document parse_file(const std::filesystem::path& path, std::string id) {
  const std::string content = read_file(path);
  try {
    return parse_iob2(content, std::move(id));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

// Regular, non-hidden files keyed by filename stem.
inline std::map<std::string, std::filesystem::path> list_documents(
    const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw LoadError("'" + dir.string() + "' is not a directory");
  std::map<std::string, fs::path> files;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    const std::string stem = entry.path().stem().string();
    if (!files.emplace(stem, entry.path()).second)
      throw LoadError("two files in '" + dir.string() + "' share the stem '" + stem + "'");
  }
  return files;
}

inline std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const std::string& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace detail

/// Builds a corpus from a reference and a hypothesis source. Directory mode
/// pairs files by stem (sorted by id); single-file mode pairs blank-line
/// separated blocks by position.
inline Corpus load_corpus(const std::filesystem::path& reference_source,
                          const std::filesystem::path& hypothesis_source, InputMode mode,
                          const LoadOptions& options = {}) {
  std::vector<DocumentPair> pairs;
  if (mode == InputMode::Directory) {
    const auto refs = detail::list_documents(reference_source);
    const auto hyps = detail::list_documents(hypothesis_source);
    std::vector<std::string> missing_hyp;
    std::vector<std::string> missing_ref;
    for (const auto& [id, _] : refs)
      if (!hyps.contains(id)) missing_hyp.push_back(id);
    for (const auto& [id, _] : hyps)
      if (!refs.contains(id)) missing_ref.push_back(id);
    if (!missing_hyp.empty() || !missing_ref.empty()) {
      std::string msg = "unmatched documents";
      if (!missing_hyp.empty())
        msg += "; no hypothesis for: " + detail::join_names(missing_hyp);
      if (!missing_ref.empty())
        msg += "; no reference for: " + detail::join_names(missing_ref);
      throw LoadError(msg);
    }
    for (const auto& [id, path] : refs)
      pairs.push_back({detail::parse_file(path, id), detail::parse_file(hyps.at(id), id)});
  } else {
    auto parse_blocks = [](const std::filesystem::path& p) {
      try {
        return parse_iob2_blocks(read_file(p));
      } catch (const ParseError& e) {
        throw ParseError(p.string() + ": " + e.what(), e.line());
      }
    };
    std::vector<Document> refs = parse_blocks(reference_source);
    std::vector<Document> hyps = parse_blocks(hypothesis_source);
    if (refs.size() != hyps.size())
      throw LoadError("document count mismatch: " + std::to_string(refs.size()) +
                      " reference vs " + std::to_string(hyps.size()) + " hypothesis blocks");
    for (std::size_t i = 0; i < refs.size(); ++i)
      pairs.push_back({std::move(refs[i]), std::move(hyps[i])});
  }
  if (options.nfc) {
    for (DocumentPair& p : pairs) {
      detail::normalize_tokens(p.reference);
      detail::normalize_tokens(p.hypothesis);
    }
  }
  return Corpus(std::move(pairs));
}

}  // namespace oieval
