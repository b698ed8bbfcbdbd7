#include "vaxkit/runfile.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "vaxkit/csv.hpp"
#include "vaxkit/errors.hpp"

namespace vaxkit {

void write_run(const RunFile& run, const std::filesystem::path& path,
               std::string_view label_delimiter) {
  std::vector<std::string> offenders;
  std::unordered_set<std::string> seen;
  for (const auto& [id, labels] : run.rows) {
    if (labels.empty() || id.empty() || !seen.insert(id).second) offenders.push_back(id);
  }
  if (!offenders.empty()) {
    throw InvariantViolationError("run rows must have unique non-empty ids and non-empty label sets",
                                  std::move(offenders));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailureError("cannot open for writing: " + path.string());
  out << "id,labels\n";
  for (const auto& [id, labels] : run.rows) {
    const std::vector<std::string> row = {id, serialize_label_set(labels, label_delimiter)};
    out << csv::render_row(row) << '\n';
  }
  out.flush();
  if (!out) throw IoFailureError("write failed: " + path.string());
}

RunFile read_run(const std::filesystem::path& path, std::string_view label_delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadableError(path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();

  csv::Reader reader(buffer.str());
  auto header = reader.next_row();
  if (!header || header->size() != 2 || (*header)[0] != "id" || (*header)[1] != "labels") {
    throw MalformedRowError(1, "expected header \"id,labels\"");
  }

  RunFile run;
  run.method_tag = path.stem().string();
  std::unordered_set<std::string> seen;
  while (auto row = reader.next_row()) {
    const std::size_t line = reader.row_line();
    if (row->size() != 2) {
      throw MalformedRowError(line, "expected 2 columns, found " + std::to_string(row->size()));
    }
    std::string id = (*row)[0];
    if (id.empty()) throw MalformedRowError(line, "empty id");
    if (!seen.insert(id).second) throw DuplicateIdError(id, line);
    LabelSet labels;
    try {
      labels = parse_label_string((*row)[1], label_delimiter);
    } catch (const UnknownLabelError& e) {
      throw UnknownLabelError(e.token, line);
    } catch (const EmptyLabelStringError&) {
      throw MalformedRowError(line, "empty label set for id \"" + id + "\"");
    }
    run.rows.emplace_back(std::move(id), labels);
  }
  return run;
}

}  // namespace vaxkit
