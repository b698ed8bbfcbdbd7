#include "vaxkit/csv.hpp"

#include "vaxkit/errors.hpp"

namespace vaxkit::csv {

std::string escape_field(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_row(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape_field(fields[i]);
  }
  return out;
}

Reader::Reader(std::string content) : content_(std::move(content)) {}

std::optional<std::vector<std::string>> Reader::next_row() {
  if (pos_ >= content_.size()) return std::nullopt;
  row_line_ = line_;

  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;

  while (pos_ < content_.size()) {
    const char c = content_[pos_];
    if (in_quotes) {
      if (c == '"') {
        if (pos_ + 1 < content_.size() && content_[pos_ + 1] == '"') {
          field += '"';
          pos_ += 2;
        } else {
          in_quotes = false;
          ++pos_;
        }
      } else {
        if (c == '\n') ++line_;
        field += c;
        ++pos_;
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty() || field_was_quoted) {
        throw MalformedRowError(line_, "stray double quote inside unquoted field");
      }
      in_quotes = true;
      field_was_quoted = true;
      ++pos_;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
      ++pos_;
    } else if (c == '\r' && pos_ + 1 < content_.size() && content_[pos_ + 1] == '\n') {
      pos_ += 2;
      ++line_;
      fields.push_back(std::move(field));
      return fields;
    } else if (c == '\n') {
      ++pos_;
      ++line_;
      fields.push_back(std::move(field));
      return fields;
    } else {
      if (field_was_quoted) {
        throw MalformedRowError(line_, "content after closing quote");
      }
      field += c;
      ++pos_;
    }
  }
  if (in_quotes) {
    throw MalformedRowError(row_line_, "unterminated quoted field at end of file");
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace vaxkit::csv
