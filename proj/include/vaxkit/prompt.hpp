#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vaxkit/labels.hpp"

namespace vaxkit {

struct DecodingParams {
  double temperature = 0.7;
  int max_tokens = 50;
  std::optional<std::vector<std::string>> stop;  // absent by default

  void validate() const;  // temperature >= 0, max_tokens >= 1
  bool operator==(const DecodingParams&) const = default;
};

/// Prompt wording lives in a versioned template so experiments can swap it
/// without touching code. {{labels}} expands to one line per label in
/// canonical order; {{tweet}} to the tweet text; the label line uses
/// {{name}}, {{description}}, {{keywords}}.
struct PromptTemplate {
  std::string version;
  std::string system_template;
  std::string user_template;
  std::string label_line;

  static const PromptTemplate& builtin();
  /// Sectioned text file ([version] / [system] / [user] / [label_line]);
  /// see configs/prompt_template.txt.
  static PromptTemplate load(const std::filesystem::path& path);
};

struct PromptBundle {
  std::string system_text;
  std::string user_text;
  DecodingParams params;
  std::string model_name;

  bool operator==(const PromptBundle&) const = default;
};

/// Deterministic rendering: identical inputs produce byte-identical bundles.
PromptBundle build_prompt(std::string_view tweet, const LabelMetaTable& metas,
                          const DecodingParams& params, std::string_view model_name,
                          const PromptTemplate& tmpl = PromptTemplate::builtin());

enum class ParseMode {
  lenient,  // scan for label names and close surface variants anywhere
  strict,   // comma/newline-separated exact identifiers only
};

/// Total function: any text (including empty or garbage) maps to a valid
/// non-empty LabelSet, with the none/empty post-processing applied.
/// Unrecognized responses yield {none} and a warning via the warning sink.
LabelSet parse_response(std::string_view raw, ParseMode mode = ParseMode::lenient);

/// Warning sink for unparseable responses; defaults to stderr. Returns the
/// previous sink.
std::function<void(std::string_view)> set_parse_warning_sink(
    std::function<void(std::string_view)> sink);

}  // namespace vaxkit
