#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "vaxkit/labels.hpp"

namespace vaxkit {

/// Submission-style prediction file: ordered (id, label set) rows plus a
/// method tag. The tag is presentation metadata taken from the filename stem
/// on read; only the rows are serialized.
struct RunFile {
  std::string method_tag;
  std::vector<std::pair<std::string, LabelSet>> rows;

  bool operator==(const RunFile&) const = default;
};

/// Validates (unique ids, non-empty label sets) before touching the
/// filesystem, then writes a CSV with header id,labels.
void write_run(const RunFile& run, const std::filesystem::path& path,
               std::string_view label_delimiter = " ");

/// Parses a run CSV; row order preserved; method_tag = filename stem.
RunFile read_run(const std::filesystem::path& path, std::string_view label_delimiter = " ");

}  // namespace vaxkit
