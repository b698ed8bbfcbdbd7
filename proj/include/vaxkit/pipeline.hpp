#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "vaxkit/classifier.hpp"
#include "vaxkit/corpus.hpp"
#include "vaxkit/llm.hpp"
#include "vaxkit/manifest.hpp"
#include "vaxkit/metrics.hpp"

namespace vaxkit::pipeline {

/// Shared corpus/file options.
struct IoOptions {
  std::string label_delimiter = " ";
  CsvSchema schema;
  std::optional<std::filesystem::path> label_config;  // label metadata override
};

struct TrainArgs {
  std::filesystem::path train_csv;
  std::string backend = "test-16";
  TrainingConfig config;
  std::filesystem::path out_checkpoint;
  IoOptions io;
};

struct TrainOutcome {
  std::filesystem::path checkpoint;
  std::filesystem::path manifest;
  std::vector<EpochLoss> training_log;
};

/// Trains on the corpus, saves the checkpoint, prints a per-epoch loss
/// summary, and writes the manifest beside the checkpoint.
TrainOutcome cmd_train(const TrainArgs& args, std::ostream& out);

struct PredictArgs {
  std::filesystem::path test_csv;
  std::filesystem::path checkpoint;
  double threshold = 0.5;
  std::filesystem::path out_run;
  bool input_has_gold = false;  // gold column optional on prediction input
  std::string run_tag;          // default: output filename stem
  IoOptions io;
};

struct PredictOutcome {
  std::filesystem::path run_file;
  std::filesystem::path manifest;
  std::size_t row_count = 0;
};

/// One run-file row per input row, order preserved. Partial outputs are
/// removed on failure.
PredictOutcome cmd_predict(const PredictArgs& args, std::ostream& out);

struct ZeroShotArgs {
  std::filesystem::path test_csv;
  std::optional<std::string> endpoint_url;  // unset when replaying
  std::filesystem::path out_run;
  ZeroShotRunOptions run;
  std::chrono::seconds endpoint_timeout{30};
  bool input_has_gold = false;
  IoOptions io;
};

struct ZeroShotOutcome {
  std::filesystem::path run_file;
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> transcript;
  std::size_t row_count = 0;
  std::size_t served_from_transcript = 0;
};

ZeroShotOutcome cmd_zeroshot(const ZeroShotArgs& args, std::ostream& out,
                             ChatEndpoint* endpoint_override = nullptr);

struct EvaluateArgs {
  std::filesystem::path run_file;
  std::filesystem::path gold_csv;
  std::optional<std::filesystem::path> report_out;  // default: <run>.report.json
  EvaluateOptions options;
  IoOptions io;
};

struct EvaluateOutcome {
  EvaluationReport report;
  std::filesystem::path report_path;
  std::filesystem::path manifest;
};

/// Requires the run ids to equal the gold ids as sets; prints the headline
/// row and per-label table; saves the structured report.
EvaluateOutcome cmd_evaluate(const EvaluateArgs& args, std::ostream& out);

struct SummarizeArgs {
  std::filesystem::path corpus_csv;
  std::optional<std::filesystem::path> report_out;  // default: <corpus>.summary.json
  IoOptions io;
};

struct SummarizeOutcome {
  CorpusSummary summary;
  std::filesystem::path report_path;
  std::filesystem::path manifest;
};

SummarizeOutcome cmd_summarize(const SummarizeArgs& args, std::ostream& out);

}  // namespace vaxkit::pipeline
