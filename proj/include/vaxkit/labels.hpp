#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vaxkit {

inline constexpr std::size_t kLabelCount = 12;

/// The twelve vaccine-concern labels, in canonical index order 0..11.
/// The order is the single source of truth shared by vectors, CSV
/// serialization, reports, and prompts.
enum class Label : std::uint8_t {
  unnecessary = 0,
  mandatory = 1,
  pharma = 2,
  conspiracy = 3,
  political = 4,
  country = 5,
  rushed = 6,
  ingredients = 7,
  side_effect = 8,
  ineffective = 9,
  religious = 10,
  none = 11,
};

/// Canonical order, stable across calls.
const std::array<Label, kLabelCount>& canonical_labels();

/// Lowercase identifier, hyphenated where applicable ("side-effect").
std::string_view label_name(Label label);

/// Exact identifier lookup after the caller has trimmed/lowercased.
std::optional<Label> label_from_token(std::string_view token);

constexpr std::size_t label_index(Label label) { return static_cast<std::size_t>(label); }

/// Set of labels backed by a 12-bit mask. Value type, cheap to copy.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::initializer_list<Label> labels);

  static LabelSet all();
  static LabelSet from_bits(std::uint16_t bits);

  bool contains(Label label) const { return (bits_ >> label_index(label)) & 1u; }
  void insert(Label label) { bits_ = static_cast<std::uint16_t>(bits_ | (1u << label_index(label))); }
  void erase(Label label) { bits_ = static_cast<std::uint16_t>(bits_ & ~(1u << label_index(label))); }

  std::size_t size() const;
  bool empty() const { return bits_ == 0; }
  std::uint16_t bits() const { return bits_; }

  /// Members in canonical order.
  std::vector<Label> to_vector() const;

  friend LabelSet operator&(LabelSet a, LabelSet b) { return from_bits(a.bits_ & b.bits_); }
  friend LabelSet operator|(LabelSet a, LabelSet b) { return from_bits(a.bits_ | b.bits_); }
  bool operator==(const LabelSet&) const = default;

 private:
  std::uint16_t bits_ = 0;
};

/// Splits on `delimiter`, trims, lowercases, and maps tokens to labels.
/// Throws UnknownLabelError for unmapped tokens and EmptyLabelStringError
/// when `raw` holds no tokens at all.
LabelSet parse_label_string(std::string_view raw, std::string_view delimiter = " ");

/// Members joined in canonical order with `delimiter`.
std::string serialize_label_set(LabelSet set, std::string_view delimiter = " ");

std::array<int, kLabelCount> to_multi_hot(LabelSet set);
LabelSet from_multi_hot(std::span<const int> bits);

/// Post-processing applied to every classifier output: an empty set becomes
/// {none}; "none" is stripped when it co-occurs with any other label.
LabelSet normalize_prediction(LabelSet predicted);

/// Counts word-boundary occurrences of a label identifier in `text`
/// (case-insensitive; boundary = non-alphanumeric or edge).
std::size_t count_label_mentions(std::string_view text, Label label);

struct LabelMeta {
  Label id;
  std::string description;            // one-sentence definition of the concern
  std::vector<std::string> keywords;  // editable cue list, may be empty

  bool operator==(const LabelMeta&) const = default;
};

using LabelMetaTable = std::array<LabelMeta, kLabelCount>;

/// Built-in metadata: definitions plus default keyword cues. Keyword lists
/// are editable defaults, not ground truth; override via a config file.
const LabelMetaTable& default_label_metas();

/// Loads the label-metadata config (blank-line separated "key: value"
/// blocks, one per label; see configs/labels.cfg). All 12 labels must be
/// present exactly once with non-empty descriptions.
LabelMetaTable load_label_metas(const std::filesystem::path& path);

}  // namespace vaxkit
