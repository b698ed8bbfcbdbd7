#include "vaxkit/labels.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <sstream>

#include "vaxkit/errors.hpp"

namespace vaxkit {

namespace {

constexpr std::array<std::string_view, kLabelCount> kNames = {
    "unnecessary", "mandatory",   "pharma",      "conspiracy",
    "political",   "country",     "rushed",      "ingredients",
    "side-effect", "ineffective", "religious",   "none",
};

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

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0; }

}  // namespace

const std::array<Label, kLabelCount>& canonical_labels() {
  static const std::array<Label, kLabelCount> order = [] {
    std::array<Label, kLabelCount> out{};
    for (std::size_t i = 0; i < kLabelCount; ++i) out[i] = static_cast<Label>(i);
    return out;
  }();
  return order;
}

std::string_view label_name(Label label) { return kNames[label_index(label)]; }

std::optional<Label> label_from_token(std::string_view token) {
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (token == kNames[i]) return static_cast<Label>(i);
  }
  return std::nullopt;
}

LabelSet::LabelSet(std::initializer_list<Label> labels) {
  for (Label l : labels) insert(l);
}

LabelSet LabelSet::all() { return from_bits(0x0FFF); }

LabelSet LabelSet::from_bits(std::uint16_t bits) {
  LabelSet s;
  s.bits_ = static_cast<std::uint16_t>(bits & 0x0FFF);
  return s;
}

std::size_t LabelSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<Label> LabelSet::to_vector() const {
  std::vector<Label> out;
  out.reserve(size());
  for (Label l : canonical_labels()) {
    if (contains(l)) out.push_back(l);
  }
  return out;
}

LabelSet parse_label_string(std::string_view raw, std::string_view delimiter) {
  if (delimiter.empty()) throw ConfigError("label delimiter must be non-empty");
  LabelSet out;
  bool saw_token = false;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    const std::size_t next = raw.find(delimiter, pos);
    const std::string_view piece =
        raw.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    const std::string_view token = trim(piece);
    if (!token.empty()) {
      saw_token = true;
      const std::string lowered = to_lower(token);
      const auto label = label_from_token(lowered);
      if (!label) throw UnknownLabelError(std::string(token));
      out.insert(*label);
    }
    if (next == std::string_view::npos) break;
    pos = next + delimiter.size();
  }
  if (!saw_token) throw EmptyLabelStringError();
  return out;
}

std::string serialize_label_set(LabelSet set, std::string_view delimiter) {
  std::string out;
  bool first = true;
  for (Label l : canonical_labels()) {
    if (!set.contains(l)) continue;
    if (!first) out += delimiter;
    out += label_name(l);
    first = false;
  }
  return out;
}

std::array<int, kLabelCount> to_multi_hot(LabelSet set) {
  std::array<int, kLabelCount> out{};
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    out[i] = set.contains(static_cast<Label>(i)) ? 1 : 0;
  }
  return out;
}

LabelSet from_multi_hot(std::span<const int> bits) {
  if (bits.size() != kLabelCount) {
    throw DimensionMismatchError(kLabelCount, bits.size());
  }
  LabelSet out;
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (bits[i] != 0) out.insert(static_cast<Label>(i));
  }
  return out;
}

LabelSet normalize_prediction(LabelSet predicted) {
  if (predicted.empty()) return LabelSet{Label::none};
  if (predicted.contains(Label::none) && predicted.size() >= 2) {
    predicted.erase(Label::none);
  }
  return predicted;
}

std::size_t count_label_mentions(std::string_view text, Label label) {
  const std::string haystack = to_lower(text);
  const std::string needle(label_name(label));
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word_char(static_cast<unsigned char>(haystack[pos - 1]));
    const std::size_t end = pos + needle.size();
    const bool right_ok =
        end >= haystack.size() || !is_word_char(static_cast<unsigned char>(haystack[end]));
    if (left_ok && right_ok) ++count;
    ++pos;
  }
  return count;
}

namespace {

LabelMetaTable builtin_metas() {
  auto meta = [](Label id, std::string description,
                 std::vector<std::string> keywords) {
    return LabelMeta{id, std::move(description), std::move(keywords)};
  };
  return LabelMetaTable{
      meta(Label::unnecessary,
           "The tweet suggests vaccines are not needed or that better alternative "
           "treatments exist.",
           {"natural immunity", "alternative treatments", "not needed", "healthy anyway"}),
      meta(Label::mandatory,
           "The tweet argues vaccines should not be required or compelled by law.",
           {"forced", "compulsory", "mandate", "required by law", "my choice"}),
      meta(Label::pharma,
           "The tweet distrusts large pharmaceutical companies or claims they are "
           "driven by profit.",
           {"drug companies", "profit", "pharmaceutical industry", "greed"}),
      meta(Label::conspiracy,
           "The tweet hints at a hidden plot beyond profit, such as surveillance "
           "through vaccination or the outbreak being a hoax.",
           {"hoax", "microchip", "surveillance", "depopulation", "plandemic"}),
      meta(Label::political,
           "The tweet claims governments or politicians push vaccines to serve "
           "their own agenda.",
           {"government agenda", "politicians", "election", "control"}),
      meta(Label::country,
           "The tweet rejects a vaccine because of the nation where it was "
           "developed or produced.",
           {"made in china", "origin", "foreign", "russian"}),
      meta(Label::rushed,
           "The tweet worries the vaccines were tested too quickly or that trial "
           "data is not trustworthy.",
           {"untested", "too fast", "trial data", "experimental", "warp speed"}),
      meta(Label::ingredients,
           "The tweet objects to substances in vaccines (such as fetal cells or "
           "chemicals) or to the technology used (such as mRNA altering DNA).",
           {"fetal cells", "chemicals", "mrna", "dna", "toxins"}),
      meta(Label::side_effect,
           "The tweet voices concern about adverse reactions to the vaccine, "
           "including reported deaths.",
           {"side effects", "deaths", "adverse reactions", "blood clots"}),
      meta(Label::ineffective,
           "The tweet doubts that vaccines work well enough to be worth taking.",
           {"does not work", "still got covid", "breakthrough", "useless"}),
      meta(Label::religious,
           "The tweet opposes vaccination on the grounds of faith or religion.",
           {"faith", "god", "beliefs", "halal"}),
      meta(Label::none,
           "The tweet gives no specific reason or gives one not covered by the "
           "other categories.",
           {"no specific reason", "other", "unrelated"}),
  };
}

std::vector<std::string> split_keywords(std::string_view value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const std::size_t next = value.find(',', pos);
    const std::string_view piece =
        value.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    const std::string_view token = trim(piece);
    if (!token.empty()) out.emplace_back(token);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

const LabelMetaTable& default_label_metas() {
  static const LabelMetaTable table = builtin_metas();
  return table;
}

LabelMetaTable load_label_metas(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileUnreadableError(path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  LabelMetaTable table{};
  std::array<bool, kLabelCount> seen{};

  std::optional<Label> current;
  std::string description;
  std::vector<std::string> keywords;
  bool keywords_present = false;

  auto flush = [&](std::size_t line_no) {
    if (!current) return;
    if (description.empty()) {
      throw ConfigError("label \"" + std::string(label_name(*current)) +
                        "\" has an empty description (before line " + std::to_string(line_no) + ")");
    }
    if (!keywords_present) {
      throw ConfigError("label \"" + std::string(label_name(*current)) +
                        "\" is missing a keywords line (may be empty, never absent)");
    }
    const std::size_t idx = label_index(*current);
    if (seen[idx]) throw ConfigError("label \"" + std::string(label_name(*current)) + "\" appears twice");
    seen[idx] = true;
    table[idx] = LabelMeta{*current, description, keywords};
    current.reset();
    description.clear();
    keywords.clear();
    keywords_present = false;
  };

  std::istringstream lines(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const std::string_view stripped = trim(line);
    if (stripped.empty()) {
      flush(line_no);
      continue;
    }
    if (stripped.front() == '#') continue;
    const std::size_t colon = stripped.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError("label config line " + std::to_string(line_no) + " is not \"key: value\"");
    }
    const std::string key = to_lower(trim(stripped.substr(0, colon)));
    const std::string_view value = trim(stripped.substr(colon + 1));
    if (key == "label") {
      const auto label = label_from_token(to_lower(value));
      if (!label) throw UnknownLabelError(std::string(value), line_no);
      if (current) flush(line_no);
      current = label;
    } else if (key == "description") {
      if (!current) throw ConfigError("description before any label (line " + std::to_string(line_no) + ")");
      description = std::string(value);
    } else if (key == "keywords") {
      if (!current) throw ConfigError("keywords before any label (line " + std::to_string(line_no) + ")");
      keywords = split_keywords(value);
      keywords_present = true;
    } else {
      throw ConfigError("unknown label config key \"" + key + "\" (line " + std::to_string(line_no) + ")");
    }
  }
  flush(line_no + 1);

  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (!seen[i]) {
      throw ConfigError("label config is missing \"" + std::string(kNames[i]) + "\"");
    }
  }
  return table;
}

}  // namespace vaxkit
