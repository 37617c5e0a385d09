#include "xweb/xml.hpp"

#include <charconv>

#include "xweb/error.hpp"

namespace xweb::xml {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) { return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.'; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace

Reader::Reader(std::string_view document) : doc_(document) {
  // UTF-8 byte order mark
  if (starts_with("\xEF\xBB\xBF")) pos_ = 3;
}

void Reader::fail(const std::string& message) const { throw ParseError(message, event_line_, event_column_); }

void Reader::fail_here(const std::string& message) const { throw ParseError(message, line_, column_); }

void Reader::advance(std::size_t n) {
  for (std::size_t i = 0; i < n && pos_ < doc_.size(); ++i, ++pos_) {
    if (doc_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
  }
}

const std::string* Reader::attribute(std::string_view key) const {
  for (const auto& a : attributes_)
    if (a.name == key) return &a.value;
  return nullptr;
}

// Comments, processing instructions, DOCTYPE and (outside the root) whitespace.
void Reader::skip_misc() {
  for (;;) {
    if (open_.empty()) {
      while (pos_ < doc_.size() && is_space(doc_[pos_])) advance(1);
    }
    if (starts_with("<!--")) {
      const auto end = doc_.find("-->", pos_ + 4);
      if (end == std::string_view::npos) fail_here("unterminated comment");
      advance(end + 3 - pos_);
    } else if (starts_with("<?")) {
      const auto end = doc_.find("?>", pos_ + 2);
      if (end == std::string_view::npos) fail_here("unterminated processing instruction");
      advance(end + 2 - pos_);
    } else if (starts_with("<!DOCTYPE")) {
      if (seen_root_ || !open_.empty()) fail_here("misplaced DOCTYPE");
      const auto end = doc_.find('>', pos_);
      if (end == std::string_view::npos) fail_here("unterminated DOCTYPE");
      if (doc_.substr(pos_, end - pos_).find('[') != std::string_view::npos)
        fail_here("DOCTYPE internal subsets are not supported");
      advance(end + 1 - pos_);
    } else {
      return;
    }
  }
}

std::string Reader::parse_name() {
  if (pos_ >= doc_.size() || !is_name_start(doc_[pos_])) fail_here("expected a name");
  const std::size_t start = pos_;
  while (pos_ < doc_.size() && is_name_char(doc_[pos_])) advance(1);
  return std::string(doc_.substr(start, pos_ - start));
}

std::string Reader::decode_entities(std::string_view raw, std::size_t line, std::size_t column) const {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '<') throw ParseError("'<' not allowed here", line, column);
    if (c != '&') {
      out += c;
      continue;
    }
    const auto semi = raw.find(';', i);
    if (semi == std::string_view::npos) throw ParseError("unterminated entity reference", line, column);
    const std::string_view ent = raw.substr(i + 1, semi - i - 1);
    if (ent == "lt") {
      out += '<';
    } else if (ent == "gt") {
      out += '>';
    } else if (ent == "amp") {
      out += '&';
    } else if (ent == "quot") {
      out += '"';
    } else if (ent == "apos") {
      out += '\'';
    } else if (!ent.empty() && ent[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = ent.size() > 1 && ent[1] == 'x';
      const std::string_view digits = ent.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || cp > 0x10FFFF)
        throw ParseError("invalid character reference &" + std::string(ent) + ";", line, column);
      append_utf8(out, cp);
    } else {
      throw ParseError("unknown entity &" + std::string(ent) + ";", line, column);
    }
    i = semi;
  }
  return out;
}

void Reader::parse_start_tag() {
  advance(1);  // '<'
  name_ = parse_name();
  attributes_.clear();
  for (;;) {
    const bool had_space = pos_ < doc_.size() && is_space(doc_[pos_]);
    while (pos_ < doc_.size() && is_space(doc_[pos_])) advance(1);
    if (pos_ >= doc_.size()) fail_here("unexpected end of document inside tag <" + name_ + ">");
    if (starts_with("/>")) {
      advance(2);
      pending_end_ = true;
      break;
    }
    if (doc_[pos_] == '>') {
      advance(1);
      break;
    }
    if (!had_space) fail_here("expected whitespace between attributes");
    const std::size_t attr_line = line_, attr_col = column_;
    Attribute attr;
    attr.name = parse_name();
    while (pos_ < doc_.size() && is_space(doc_[pos_])) advance(1);
    if (pos_ >= doc_.size() || doc_[pos_] != '=') fail_here("expected '=' after attribute " + attr.name);
    advance(1);
    while (pos_ < doc_.size() && is_space(doc_[pos_])) advance(1);
    if (pos_ >= doc_.size() || (doc_[pos_] != '"' && doc_[pos_] != '\'')) fail_here("expected quoted attribute value");
    const char quote = doc_[pos_];
    advance(1);
    const auto end = doc_.find(quote, pos_);
    if (end == std::string_view::npos) fail_here("unterminated attribute value");
    attr.value = decode_entities(doc_.substr(pos_, end - pos_), attr_line, attr_col);
    advance(end + 1 - pos_);
    for (const auto& existing : attributes_)
      if (existing.name == attr.name) throw ParseError("duplicate attribute " + attr.name, attr_line, attr_col);
    attributes_.push_back(std::move(attr));
  }
  if (open_.empty() && seen_root_) fail("content after the document element");
  seen_root_ = true;
  open_.push_back(name_);
}

void Reader::parse_end_tag() {
  advance(2);  // "</"
  name_ = parse_name();
  while (pos_ < doc_.size() && is_space(doc_[pos_])) advance(1);
  if (pos_ >= doc_.size() || doc_[pos_] != '>') fail_here("expected '>' in end tag");
  advance(1);
  if (open_.empty() || open_.back() != name_)
    fail("mismatched end tag </" + name_ + ">" + (open_.empty() ? "" : ", expected </" + open_.back() + ">"));
  open_.pop_back();
}

void Reader::parse_text() {
  text_.clear();
  while (pos_ < doc_.size()) {
    if (starts_with("<![CDATA[")) {
      const auto close = doc_.find("]]>", pos_ + 9);
      if (close == std::string_view::npos) fail_here("unterminated CDATA section");
      text_.append(doc_.substr(pos_ + 9, close - pos_ - 9));
      advance(close + 3 - pos_);
      continue;
    }
    if (doc_[pos_] == '<') break;
    const std::size_t start = pos_;
    const std::size_t l = line_, c = column_;
    auto end = doc_.find('<', pos_);
    if (end == std::string_view::npos) end = doc_.size();
    advance(end - start);
    const std::string_view raw = doc_.substr(start, end - start);
    if (raw.find("]]>") != std::string_view::npos) throw ParseError("']]>' not allowed in text", l, c);
    text_ += decode_entities(raw, l, c);
  }
}

Reader::Event Reader::next() {
  if (pending_end_) {
    pending_end_ = false;
    open_.pop_back();
    return Event::kEndElement;
  }
  for (;;) {
    skip_misc();
    event_line_ = line_;
    event_column_ = column_;
    if (pos_ >= doc_.size()) {
      if (!open_.empty()) fail_here("unexpected end of document, <" + open_.back() + "> not closed");
      if (!seen_root_) fail_here("document has no root element");
      return Event::kEndDocument;
    }
    if (starts_with("<![CDATA[")) {
      if (open_.empty()) fail_here("CDATA outside the document element");
      parse_text();
      return Event::kText;
    }
    if (starts_with("</")) {
      parse_end_tag();
      return Event::kEndElement;
    }
    if (doc_[pos_] == '<') {
      parse_start_tag();
      return Event::kStartElement;
    }
    if (open_.empty()) fail_here("text outside the document element");
    parse_text();
    return Event::kText;
  }
}

const std::string* Element::attribute(std::string_view key) const {
  for (const auto& a : attributes)
    if (a.name == key) return &a.value;
  return nullptr;
}

const Element* Element::child(std::string_view child_name) const {
  for (const auto& c : children)
    if (c.name == child_name) return &c;
  return nullptr;
}

Element parse_document(std::string_view document) {
  Reader reader(document);
  std::vector<Element> stack;
  Element root;
  for (;;) {
    switch (reader.next()) {
      case Reader::Event::kStartElement: {
        Element e;
        e.name = reader.name();
        e.attributes = reader.attributes();
        e.line = reader.line();
        e.column = reader.column();
        stack.push_back(std::move(e));
        break;
      }
      case Reader::Event::kEndElement: {
        Element done = std::move(stack.back());
        stack.pop_back();
        if (stack.empty()) {
          root = std::move(done);
        } else {
          stack.back().children.push_back(std::move(done));
        }
        break;
      }
      case Reader::Event::kText:
        stack.back().text += reader.text();
        break;
      case Reader::Event::kEndDocument:
        return root;
    }
  }
}

}  // namespace xweb::xml
