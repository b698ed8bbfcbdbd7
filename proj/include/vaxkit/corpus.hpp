#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vaxkit/labels.hpp"

namespace vaxkit {

struct TweetRecord {
  std::string id;
  std::string text;
  std::optional<LabelSet> gold;  // absent for unlabeled prediction input

  bool operator==(const TweetRecord&) const = default;
};

/// Column naming and header handling for corpus CSVs. Headerless files are
/// read positionally as id, tweet, labels.
struct CsvSchema {
  std::string id_column = "id";
  std::string text_column = "tweet";
  std::string label_column = "labels";
  bool has_header = true;
};

/// Loads a corpus CSV. Gold labels are parsed with `label_delimiter` when
/// `has_gold` is set; otherwise the label column is optional and ignored.
/// Text is trimmed of surrounding whitespace and must be non-empty; ids must
/// be non-empty and unique. Row order is preserved.
std::vector<TweetRecord> load_csv(const std::filesystem::path& path, bool has_gold,
                                  std::string_view label_delimiter = " ",
                                  const CsvSchema& schema = {});

/// Inverse of load_csv. Emits a label column iff the records carry gold.
void write_csv(const std::vector<TweetRecord>& records, const std::filesystem::path& path,
               std::string_view label_delimiter = " ", const CsvSchema& schema = {});

struct CorpusSummary {
  std::size_t record_count = 0;
  std::array<std::size_t, kLabelCount> per_label_counts{};
  double multi_label_fraction = 0.0;  // share of records with >= 2 gold labels

  bool operator==(const CorpusSummary&) const = default;
};

/// All records must carry gold labels (MissingGoldError otherwise).
CorpusSummary summarize(const std::vector<TweetRecord>& records);

/// Aligned text table of the summary.
std::string summary_table(const CorpusSummary& summary);

}  // namespace vaxkit
