#pragma once

#include <array>
#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "vaxkit/corpus.hpp"
#include "vaxkit/labels.hpp"

namespace vaxkit::testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("vaxkit-test-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline LabelSet random_label_set(std::mt19937& rng, bool allow_empty = false) {
  std::uniform_int_distribution<int> bits(0, 0x0FFF);
  for (;;) {
    const auto set = LabelSet::from_bits(static_cast<std::uint16_t>(bits(rng)));
    if (allow_empty || !set.empty()) return set;
  }
}

/// Id/text strings that exercise CSV quoting: commas, quotes, newlines.
inline std::string random_adversarial_text(std::mt19937& rng) {
  static const std::vector<std::string> pieces = {
      "plain words",  "with, comma", "a \"quoted\" bit", "line\nbreak",  "crlf\r\n",
      "trailing ,,,", "emoji \xF0\x9F\x92\x89",          "semi;colon",   "tab\tstop",
      "ends with quote\"",
  };
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> count(1, 3);
  std::string out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += pieces[pick(rng)];
  }
  return out;
}

inline std::string random_id(std::mt19937& rng, std::size_t index) {
  std::uniform_int_distribution<int> style(0, 3);
  switch (style(rng)) {
    case 0: return "id-" + std::to_string(index);
    case 1: return "tw_" + std::to_string(index) + "_x";
    case 2: return "id,with,commas-" + std::to_string(index);
    default: return "id \"q\" " + std::to_string(index);
  }
}

/// 20 linearly separable single-label records covering all 12 labels. Each
/// label owns a disjoint token vocabulary, so embeddings from the hash test
/// backend cluster by label.
inline std::vector<TweetRecord> separable_corpus() {
  static const std::array<const char*, 12> vocab = {
      "herbs enough healthy",       "forced law freedom",
      "profits greedy corporations", "microchip hoax tracking",
      "election votes agenda",       "origin foreign imported",
      "untested hasty quick",        "chemicals mercury cells",
      "clots fever myocarditis",     "useless breakthrough failed",
      "faith god belief",            "meh whatever shrug",
  };
  static const std::array<const char*, 8> rephrased = {
      "healthy enough herbs herbs", "law law freedom forced",
      "greedy corporations profits", "hoax tracking microchip hoax",
      "votes agenda election votes", "foreign imported origin",
      "quick untested hasty hasty",  "mercury cells chemicals",
  };
  std::vector<TweetRecord> records;
  for (std::size_t i = 0; i < 12; ++i) {
    records.push_back({"sep-" + std::to_string(i), vocab[i],
                       LabelSet{static_cast<Label>(i)}});
  }
  for (std::size_t i = 0; i < 8; ++i) {
    records.push_back({"sep-" + std::to_string(12 + i), rephrased[i],
                       LabelSet{static_cast<Label>(i)}});
  }
  return records;
}

}  // namespace vaxkit::testutil
