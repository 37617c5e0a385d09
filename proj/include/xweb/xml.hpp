#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xweb::xml {

/// Escapes &, <, >, " and ' for use in text or attribute values.
std::string escape(std::string_view text);

struct Attribute {
  std::string name;
  std::string value;
};

/// Non-validating pull parser over an in-memory document. Handles the XML
/// declaration, comments, processing instructions, a DOCTYPE without an
/// internal subset, CDATA and the predefined/numeric entities. Reports
/// well-formedness errors as ParseError with line and column.
class Reader {
 public:
  enum class Event { kStartElement, kEndElement, kText, kEndDocument };

  explicit Reader(std::string_view document);

  Event next();

  /// Valid after kStartElement / kEndElement.
  const std::string& name() const { return name_; }
  /// Valid after kStartElement.
  const std::vector<Attribute>& attributes() const { return attributes_; }
  const std::string* attribute(std::string_view name) const;
  /// Decoded character data; valid after kText.
  const std::string& text() const { return text_; }

  std::size_t depth() const { return open_.size(); }
  std::size_t line() const { return event_line_; }
  std::size_t column() const { return event_column_; }

  [[noreturn]] void fail(const std::string& message) const;

 private:
  void skip_misc();
  void parse_start_tag();
  void parse_end_tag();
  void parse_text();
  std::string parse_name();
  std::string decode_entities(std::string_view raw, std::size_t line, std::size_t column) const;
  void advance(std::size_t n);
  bool starts_with(std::string_view s) const { return doc_.compare(pos_, s.size(), s) == 0; }
  [[noreturn]] void fail_here(const std::string& message) const;

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::size_t event_line_ = 1;
  std::size_t event_column_ = 1;

  std::vector<std::string> open_;
  bool seen_root_ = false;
  bool pending_end_ = false;  // self-closing element awaiting its end event
  std::string name_;
  std::vector<Attribute> attributes_;
  std::string text_;
};

/// Minimal element tree for the small metadata and dimension documents.
struct Element {
  std::string name;
  std::vector<Attribute> attributes;
  std::string text;  // concatenated direct character data
  std::vector<Element> children;
  std::size_t line = 0;
  std::size_t column = 0;

  const std::string* attribute(std::string_view key) const;
  const Element* child(std::string_view child_name) const;
};

/// Parses a whole document into an element tree rooted at the document element.
Element parse_document(std::string_view document);

}  // namespace xweb::xml
