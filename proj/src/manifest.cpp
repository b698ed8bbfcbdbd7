#include "vaxkit/manifest.hpp"

#include <ctime>
#include <fstream>

#include "vaxkit/errors.hpp"
#include "vaxkit/version.hpp"

namespace vaxkit {

std::string now_iso8601_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p += ".manifest.json";
  return p;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  const nlohmann::json j = {
      {"subcommand", manifest.subcommand},
      {"toolkit_version",
       manifest.toolkit_version.empty() ? std::string(kVersion) : manifest.toolkit_version},
      {"config", manifest.config},
      {"inputs", manifest.inputs},
      {"outputs", manifest.outputs},
      {"seed", manifest.seed},
      {"started_at", manifest.started_at},
      {"finished_at", manifest.finished_at},
      {"success", manifest.success},
      {"error", manifest.error},
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailureError("cannot write manifest: " + path.string());
  out << j.dump(2) << '\n';
  out.flush();
  if (!out) throw IoFailureError("manifest write failed: " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadableError(path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoFailureError("malformed manifest " + path.string() + ": " + e.what());
  }
  RunManifest m;
  m.subcommand = j.value("subcommand", std::string{});
  m.toolkit_version = j.value("toolkit_version", std::string{});
  m.config = j.value("config", nlohmann::json::object());
  m.inputs = j.value("inputs", nlohmann::json::object());
  m.outputs = j.value("outputs", nlohmann::json::object());
  m.seed = j.value("seed", std::uint64_t{0});
  m.started_at = j.value("started_at", std::string{});
  m.finished_at = j.value("finished_at", std::string{});
  m.success = j.value("success", false);
  m.error = j.value("error", std::string{});
  return m;
}

}  // namespace vaxkit
