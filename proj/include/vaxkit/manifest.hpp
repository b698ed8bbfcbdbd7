#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace vaxkit {

/// Audit record written beside every subcommand's outputs: what ran, with
/// which resolved configuration, on which files, and whether it succeeded.
struct RunManifest {
  std::string subcommand;
  std::string toolkit_version;
  nlohmann::json config = nlohmann::json::object();   // resolved snapshot
  nlohmann::json inputs = nlohmann::json::object();   // name -> path
  nlohmann::json outputs = nlohmann::json::object();  // name -> path
  std::uint64_t seed = 0;
  std::string started_at;   // ISO-8601 UTC
  std::string finished_at;
  bool success = false;
  std::string error;  // empty on success
};

std::string now_iso8601_utc();

/// `<output>.manifest.json`
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace vaxkit
