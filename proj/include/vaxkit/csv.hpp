#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vaxkit::csv {

/// Quotes a field when it contains a comma, double quote, CR, or LF.
std::string escape_field(std::string_view field);

/// Renders one row, no trailing newline.
std::string render_row(std::span<const std::string> fields);

/// Incremental RFC-4180 row reader over an in-memory buffer. Quoted fields
/// may contain commas, quotes ("" escape), and newlines. Rows end at LF or
/// CRLF outside quotes.
class Reader {
 public:
  explicit Reader(std::string content);

  /// Next row, or nullopt at end of input. Throws MalformedRowError on a
  /// stray quote or an unterminated quoted field.
  std::optional<std::vector<std::string>> next_row();

  /// 1-based physical line on which the most recent row started.
  std::size_t row_line() const { return row_line_; }

 private:
  std::string content_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t row_line_ = 1;
};

}  // namespace vaxkit::csv
