#include "vaxkit/corpus.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include "vaxkit/csv.hpp"
#include "vaxkit/errors.hpp"

namespace vaxkit {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

struct ColumnLayout {
  std::size_t id = 0;
  std::size_t text = 1;
  std::optional<std::size_t> labels;
  std::size_t width = 2;
};

ColumnLayout resolve_columns(const std::vector<std::string>& header, const CsvSchema& schema,
                             bool has_gold) {
  ColumnLayout layout;
  auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (std::string(trim(header[i])) == name) return i;
    }
    return std::nullopt;
  };
  const auto id_col = find(schema.id_column);
  const auto text_col = find(schema.text_column);
  const auto label_col = find(schema.label_column);
  if (!id_col) throw MalformedRowError(1, "header is missing column \"" + schema.id_column + "\"");
  if (!text_col) throw MalformedRowError(1, "header is missing column \"" + schema.text_column + "\"");
  if (has_gold && !label_col) {
    throw MalformedRowError(1, "header is missing column \"" + schema.label_column + "\"");
  }
  layout.id = *id_col;
  layout.text = *text_col;
  layout.labels = label_col;
  layout.width = header.size();
  return layout;
}

}  // namespace

std::vector<TweetRecord> load_csv(const std::filesystem::path& path, bool has_gold,
                                  std::string_view label_delimiter, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadableError(path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw FileUnreadableError(path.string());

  csv::Reader reader(buffer.str());
  ColumnLayout layout;
  if (schema.has_header) {
    auto header = reader.next_row();
    if (!header) throw MalformedRowError(1, "file is empty, expected a header row");
    layout = resolve_columns(*header, schema, has_gold);
  } else {
    layout.labels = has_gold ? std::optional<std::size_t>(2) : std::nullopt;
    layout.width = has_gold ? 3 : 2;
  }

  std::vector<TweetRecord> records;
  std::unordered_set<std::string> seen_ids;
  while (auto row = reader.next_row()) {
    const std::size_t line = reader.row_line();
    if (!schema.has_header && !has_gold && row->size() == 3) {
      // Headerless prediction input may still carry a labels column; ignore it.
    } else if (row->size() != layout.width) {
      throw MalformedRowError(line, "expected " + std::to_string(layout.width) +
                                        " columns, found " + std::to_string(row->size()));
    }

    TweetRecord record;
    record.id = (*row)[layout.id];
    record.text = std::string(trim((*row)[layout.text]));
    if (record.id.empty()) throw MalformedRowError(line, "empty id");
    if (record.text.empty()) throw MalformedRowError(line, "empty tweet text");
    if (!seen_ids.insert(record.id).second) throw DuplicateIdError(record.id, line);

    if (has_gold) {
      const std::string& raw = (*row)[*layout.labels];
      try {
        record.gold = parse_label_string(raw, label_delimiter);
      } catch (const UnknownLabelError& e) {
        throw UnknownLabelError(e.token, line);
      } catch (const EmptyLabelStringError&) {
        throw MalformedRowError(line, "empty label string for id \"" + record.id + "\"");
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

void write_csv(const std::vector<TweetRecord>& records, const std::filesystem::path& path,
               std::string_view label_delimiter, const CsvSchema& schema) {
  const bool any_gold = !records.empty() && records.front().gold.has_value();
  for (const auto& r : records) {
    if (r.gold.has_value() != any_gold) {
      throw ConfigError("cannot serialize a corpus that mixes labeled and unlabeled records");
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailureError("cannot open for writing: " + path.string());
  if (schema.has_header) {
    std::vector<std::string> header = {schema.id_column, schema.text_column};
    if (any_gold) header.push_back(schema.label_column);
    out << csv::render_row(header) << '\n';
  }
  for (const auto& r : records) {
    std::vector<std::string> row = {r.id, r.text};
    if (any_gold) row.push_back(serialize_label_set(*r.gold, label_delimiter));
    out << csv::render_row(row) << '\n';
  }
  out.flush();
  if (!out) throw IoFailureError("write failed: " + path.string());
}

CorpusSummary summarize(const std::vector<TweetRecord>& records) {
  CorpusSummary summary;
  summary.record_count = records.size();
  std::size_t multi = 0;
  for (const auto& r : records) {
    if (!r.gold) throw MissingGoldError(r.id);
    for (Label l : canonical_labels()) {
      if (r.gold->contains(l)) ++summary.per_label_counts[label_index(l)];
    }
    if (r.gold->size() >= 2) ++multi;
  }
  summary.multi_label_fraction =
      records.empty() ? 0.0 : static_cast<double>(multi) / static_cast<double>(records.size());
  return summary;
}

std::string summary_table(const CorpusSummary& summary) {
  std::ostringstream out;
  out << "records: " << summary.record_count << '\n';
  out << "multi-label fraction: " << std::fixed << std::setprecision(4)
      << summary.multi_label_fraction << '\n';
  out << '\n';
  std::size_t name_width = 5;  // "label"
  for (Label l : canonical_labels()) name_width = std::max(name_width, label_name(l).size());
  out << std::left << std::setw(static_cast<int>(name_width)) << "label" << "  count\n";
  for (Label l : canonical_labels()) {
    out << std::left << std::setw(static_cast<int>(name_width)) << label_name(l) << "  "
        << summary.per_label_counts[label_index(l)] << '\n';
  }
  return out.str();
}

}  // namespace vaxkit
