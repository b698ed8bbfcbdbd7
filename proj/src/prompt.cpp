#include "vaxkit/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "vaxkit/errors.hpp"

namespace vaxkit {

void DecodingParams::validate() const {
  if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
  if (max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
}

namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

std::string replace_all(std::string text, std::string_view placeholder, std::string_view value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
  return text;
}

std::mutex g_sink_mutex;
std::function<void(std::string_view)> g_warning_sink = [](std::string_view msg) {
  std::cerr << "[vaxkit] warning: " << msg << '\n';
};

void warn(std::string_view msg) {
  std::function<void(std::string_view)> sink;
  {
    std::lock_guard<std::mutex> lock(g_sink_mutex);
    sink = g_warning_sink;
  }
  if (sink) sink(msg);
}

}  // namespace

std::function<void(std::string_view)> set_parse_warning_sink(
    std::function<void(std::string_view)> sink) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  std::swap(g_warning_sink, sink);
  return sink;
}

const PromptTemplate& PromptTemplate::builtin() {
  static const PromptTemplate tmpl = {
      "v1",
      "You are a strict multi-label classifier for vaccine-hesitancy tweets.\n"
      "Assign the tweet below one or more of the twelve concern categories.\n"
      "Each category is given as \"name: definition (keywords: cue words)\".\n"
      "\n"
      "{{labels}}\n"
      "\n"
      "Reply with only the matching category names, separated by commas.\n"
      "If no other category fits, reply with the last one alone.",
      "Tweet: {{tweet}}\n\nLabels:",
      "{{name}}: {{description}} (keywords: {{keywords}})",
  };
  return tmpl;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileUnreadableError(path.string());

  PromptTemplate tmpl;
  std::string* current = nullptr;
  std::string line;
  bool first_line_of_section = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view stripped = trim(line);
    if (stripped == "[version]") { current = &tmpl.version; first_line_of_section = true; continue; }
    if (stripped == "[system]") { current = &tmpl.system_template; first_line_of_section = true; continue; }
    if (stripped == "[user]") { current = &tmpl.user_template; first_line_of_section = true; continue; }
    if (stripped == "[label_line]") { current = &tmpl.label_line; first_line_of_section = true; continue; }
    if (!current) {
      if (stripped.empty() || stripped.front() == '#') continue;
      throw ConfigError("prompt template content before any [section] header");
    }
    if (!first_line_of_section) *current += '\n';
    *current += line;
    first_line_of_section = false;
  }
  // Section bodies keep interior blank lines; strip the trailing ones.
  for (std::string* section : {&tmpl.version, &tmpl.system_template, &tmpl.user_template,
                               &tmpl.label_line}) {
    while (!section->empty() && (section->back() == '\n' || section->back() == ' ')) {
      section->pop_back();
    }
  }
  if (tmpl.version.empty()) throw ConfigError("prompt template is missing [version]");
  if (tmpl.system_template.find("{{labels}}") == std::string::npos) {
    throw ConfigError("prompt template [system] must contain {{labels}}");
  }
  if (tmpl.user_template.find("{{tweet}}") == std::string::npos) {
    throw ConfigError("prompt template [user] must contain {{tweet}}");
  }
  if (tmpl.label_line.empty()) throw ConfigError("prompt template is missing [label_line]");
  return tmpl;
}

PromptBundle build_prompt(std::string_view tweet, const LabelMetaTable& metas,
                          const DecodingParams& params, std::string_view model_name,
                          const PromptTemplate& tmpl) {
  if (trim(tweet).empty()) throw ConfigError("cannot build a prompt for an empty tweet");
  params.validate();

  std::string label_lines;
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    const LabelMeta& meta = metas[i];
    if (meta.description.empty()) {
      throw ConfigError("label \"" + std::string(label_name(meta.id)) + "\" has no description");
    }
    std::string keywords;
    for (std::size_t k = 0; k < meta.keywords.size(); ++k) {
      if (k) keywords += ", ";
      keywords += meta.keywords[k];
    }
    std::string line = replace_all(tmpl.label_line, "{{name}}", label_name(meta.id));
    line = replace_all(line, "{{description}}", meta.description);
    line = replace_all(line, "{{keywords}}", keywords);
    if (i) label_lines += '\n';
    label_lines += line;
  }

  PromptBundle bundle;
  bundle.system_text = replace_all(tmpl.system_template, "{{labels}}", label_lines);
  bundle.user_text = replace_all(tmpl.user_template, "{{tweet}}", tweet);
  bundle.params = params;
  bundle.model_name = std::string(model_name);
  return bundle;
}

namespace {

/// Surface forms accepted for each label beyond the identifier itself.
const std::vector<std::string>& variants_for(Label label) {
  static const std::array<std::vector<std::string>, kLabelCount> table = [] {
    std::array<std::vector<std::string>, kLabelCount> t;
    for (std::size_t i = 0; i < kLabelCount; ++i) {
      t[i] = {std::string(label_name(static_cast<Label>(i)))};
    }
    auto add = [&](Label l, std::initializer_list<const char*> extra) {
      for (const char* v : extra) t[label_index(l)].emplace_back(v);
    };
    add(Label::side_effect, {"side effect", "side effects", "side-effects", "side_effect",
                             "side_effects", "sideeffect", "sideeffects"});
    add(Label::conspiracy, {"conspiracies"});
    add(Label::ingredients, {"ingredient"});
    add(Label::pharma, {"pharmaceutical", "pharmaceuticals"});
    add(Label::religious, {"religion"});
    return t;
  }();
  return table[label_index(label)];
}

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0; }

bool contains_word(const std::string& haystack, const std::string& needle) {
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word_char(static_cast<unsigned char>(haystack[pos - 1]));
    const std::size_t end = pos + needle.size();
    const bool right_ok =
        end >= haystack.size() || !is_word_char(static_cast<unsigned char>(haystack[end]));
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

LabelSet parse_lenient(const std::string& lowered) {
  LabelSet found;
  for (Label l : canonical_labels()) {
    for (const auto& variant : variants_for(l)) {
      if (contains_word(lowered, variant)) {
        found.insert(l);
        break;
      }
    }
  }
  return found;
}

LabelSet parse_strict(const std::string& lowered) {
  LabelSet found;
  std::size_t start = 0;
  auto consume = [&](std::size_t end) {
    std::string_view token = trim(std::string_view(lowered).substr(start, end - start));
    while (!token.empty() && (token.back() == '.' || token.back() == '!')) {
      token = token.substr(0, token.size() - 1);
    }
    if (token.empty()) return;
    if (auto label = label_from_token(token)) {
      found.insert(*label);
    } else {
      warn("strict parse skipped token \"" + std::string(token) + "\"");
    }
  };
  for (std::size_t i = 0; i < lowered.size(); ++i) {
    if (lowered[i] == ',' || lowered[i] == '\n') {
      consume(i);
      start = i + 1;
    }
  }
  consume(lowered.size());
  return found;
}

}  // namespace

LabelSet parse_response(std::string_view raw, ParseMode mode) {
  const std::string lowered = to_lower(raw);
  const LabelSet found = mode == ParseMode::lenient ? parse_lenient(lowered) : parse_strict(lowered);
  if (found.empty()) {
    warn("response contained no recognizable label names; falling back to {none}");
  }
  return normalize_prediction(found);
}

}  // namespace vaxkit
