#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vaxkit/errors.hpp"
#include "vaxkit/pipeline.hpp"
#include "vaxkit/version.hpp"

namespace {

using namespace vaxkit;

// Exit codes, one per error family (documented in the README).
constexpr int kExitUsage = 2;
constexpr int kExitFileUnreadable = 3;
constexpr int kExitBadData = 4;
constexpr int kExitBackend = 5;
constexpr int kExitTraining = 6;
constexpr int kExitEndpoint = 7;
constexpr int kExitEvaluation = 8;
constexpr int kExitCheckpoint = 9;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitUsage;
  if (dynamic_cast<const FileUnreadableError*>(&e) || dynamic_cast<const IoFailureError*>(&e)) {
    return kExitFileUnreadable;
  }
  if (dynamic_cast<const MalformedRowError*>(&e) || dynamic_cast<const UnknownLabelError*>(&e) ||
      dynamic_cast<const DuplicateIdError*>(&e) ||
      dynamic_cast<const EmptyLabelStringError*>(&e) ||
      dynamic_cast<const MissingGoldError*>(&e) ||
      dynamic_cast<const InvariantViolationError*>(&e)) {
    return kExitBadData;
  }
  if (dynamic_cast<const BackendUnavailableError*>(&e) ||
      dynamic_cast<const TokenizationFailureError*>(&e) ||
      dynamic_cast<const DimensionMismatchError*>(&e)) {
    return kExitBackend;
  }
  if (dynamic_cast<const NonFiniteLossError*>(&e)) return kExitTraining;
  if (dynamic_cast<const AuthFailureError*>(&e) || dynamic_cast<const RateLimitedError*>(&e) ||
      dynamic_cast<const EndpointTimeoutError*>(&e) || dynamic_cast<const EndpointError*>(&e) ||
      dynamic_cast<const RetriesExhaustedError*>(&e) ||
      dynamic_cast<const ReplayMissError*>(&e)) {
    return kExitEndpoint;
  }
  if (dynamic_cast<const IdMismatchError*>(&e) || dynamic_cast<const EmptyEvaluationError*>(&e)) {
    return kExitEvaluation;
  }
  if (dynamic_cast<const ChecksumMismatchError*>(&e) ||
      dynamic_cast<const VersionMismatchError*>(&e)) {
    return kExitCheckpoint;
  }
  return 1;
}

/// Environment overrides sit between config-file values and explicit flags:
/// inject them as argv entries (so they beat the config file) only when the
/// flag is absent (so explicit flags beat them). Flags are injected only for
/// the subcommand that understands them.
void apply_env_overrides(std::vector<std::string>& args) {
  if (args.empty()) return;
  const std::string& subcommand = args.front();
  const bool zeroshot = subcommand == "zeroshot";
  std::vector<std::pair<const char*, const char*>> env_flags = {
      {"VAXKIT_DELIMITER", "--delimiter"},
  };
  if (zeroshot) {
    env_flags.insert(env_flags.end(), {{"VAXKIT_ENDPOINT", "--endpoint"},
                                       {"VAXKIT_MODEL", "--model"},
                                       {"VAXKIT_CACHE_DIR", "--cache-dir"},
                                       {"VAXKIT_TIMEOUT", "--timeout"},
                                       {"VAXKIT_RETRIES", "--retries"},
                                       {"VAXKIT_CONCURRENCY", "--concurrency"}});
  }
  for (const auto& [env, flag] : env_flags) {
    const char* value = std::getenv(env);
    if (!value || *value == '\0') continue;
    const std::string prefix = std::string(flag) + "=";
    bool present = false;
    for (const auto& a : args) {
      if (a == flag || a.rfind(prefix, 0) == 0) {
        present = true;
        break;
      }
    }
    if (!present) args.push_back(prefix + value);
  }
}

void add_io_flags(CLI::App* cmd, pipeline::IoOptions& io) {
  cmd->add_option("--delimiter", io.label_delimiter,
                  "Token separating label names inside one CSV field")
      ->capture_default_str();
  cmd->add_option("--id-column", io.schema.id_column, "Header name of the id column")
      ->capture_default_str();
  cmd->add_option("--text-column", io.schema.text_column, "Header name of the tweet column")
      ->capture_default_str();
  cmd->add_option("--label-column", io.schema.label_column, "Header name of the label column")
      ->capture_default_str();
  cmd->add_flag("--no-header{false}", io.schema.has_header,
                "Input CSV has no header row (columns are id, tweet, labels)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vaxkit: multi-label vaccine-concern classification toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "Read defaults from an INI/TOML config file");
  app.require_subcommand(1);

  // ---- train ----
  auto* train_cmd = app.add_subcommand("train", "Fine-tune an encoder + dense head classifier");
  pipeline::TrainArgs train_args;
  train_cmd->add_option("--train", train_args.train_csv, "Training CSV with gold labels")
      ->required();
  train_cmd->add_option("--out", train_args.out_checkpoint, "Checkpoint output path")->required();
  train_cmd->add_option("--backend", train_args.backend, "Encoder backend name")
      ->capture_default_str();
  train_cmd->add_option("--epochs", train_args.config.epochs)->capture_default_str();
  train_cmd->add_option("--batch-size", train_args.config.batch_size)->capture_default_str();
  train_cmd->add_option("--lr", train_args.config.learning_rate)->capture_default_str();
  train_cmd->add_option("--threshold", train_args.config.threshold)->capture_default_str();
  train_cmd->add_option("--seed", train_args.config.seed)->capture_default_str();
  train_cmd->add_flag("--freeze-encoder", train_args.config.freeze_encoder,
                      "Train only the dense head, leaving encoder parameters fixed");
  train_cmd->add_flag("--no-shuffle{false}", train_args.config.shuffle_each_epoch,
                      "Keep the record order fixed across epochs");
  add_io_flags(train_cmd, train_args.io);

  // ---- predict ----
  auto* predict_cmd = app.add_subcommand("predict", "Classify a corpus with a trained checkpoint");
  pipeline::PredictArgs predict_args;
  predict_cmd->add_option("--test", predict_args.test_csv, "Input CSV (gold column optional)")
      ->required();
  predict_cmd->add_option("--checkpoint", predict_args.checkpoint, "Trained checkpoint")
      ->required();
  predict_cmd->add_option("--out", predict_args.out_run, "Run-file output path")->required();
  predict_cmd->add_option("--threshold", predict_args.threshold, "Probability cutoff")
      ->capture_default_str();
  predict_cmd->add_flag("--with-gold", predict_args.input_has_gold,
                        "Input carries (and must parse) a gold label column");
  predict_cmd->add_option("--tag", predict_args.run_tag, "Method tag (default: output stem)");
  add_io_flags(predict_cmd, predict_args.io);

  // ---- zeroshot ----
  auto* zs_cmd = app.add_subcommand("zeroshot", "Classify via a chat-completion endpoint");
  pipeline::ZeroShotArgs zs_args;
  std::string zs_endpoint;
  std::string zs_transcript, zs_replay, zs_cache_dir, zs_prompt_template, zs_label_config;
  std::string zs_parse_mode = "lenient";
  long zs_timeout_s = 30;
  long zs_min_interval_ms = 0;
  zs_cmd->add_option("--test", zs_args.test_csv, "Input CSV (gold column optional)")->required();
  zs_cmd->add_option("--out", zs_args.out_run, "Run-file output path")->required();
  zs_cmd->add_option("--endpoint", zs_endpoint,
                     "Chat-completion base URL, e.g. https://api.example.com");
  zs_cmd->add_option("--model", zs_args.run.model_name, "Model name sent to the endpoint")
      ->capture_default_str();
  zs_cmd->add_option("--temperature", zs_args.run.params.temperature)->capture_default_str();
  zs_cmd->add_option("--max-tokens", zs_args.run.params.max_tokens)->capture_default_str();
  zs_cmd->add_option("--transcript", zs_transcript,
                     "JSONL transcript to append to (and resume from)");
  zs_cmd->add_option("--replay", zs_replay, "Replay a recorded transcript; no endpoint calls");
  zs_cmd->add_option("--cache-dir", zs_cache_dir, "Directory for the raw-response cache");
  zs_cmd->add_option("--concurrency", zs_args.run.concurrency, "Max in-flight requests")
      ->capture_default_str();
  zs_cmd->add_option("--retries", zs_args.run.retry.max_attempts, "Max attempts per tweet")
      ->capture_default_str();
  zs_cmd->add_option("--timeout", zs_timeout_s, "Endpoint timeout in seconds")
      ->capture_default_str();
  zs_cmd->add_option("--min-interval", zs_min_interval_ms,
                     "Minimum milliseconds between request starts");
  zs_cmd->add_option("--parse-mode", zs_parse_mode, "Response parsing: lenient or strict")
      ->check(CLI::IsMember({"lenient", "strict"}))
      ->capture_default_str();
  zs_cmd->add_option("--prompt-template", zs_prompt_template, "Prompt template file");
  zs_cmd->add_option("--label-config", zs_label_config, "Label metadata config file");
  zs_cmd->add_flag("--with-gold", zs_args.input_has_gold,
                   "Input carries (and must parse) a gold label column");
  add_io_flags(zs_cmd, zs_args.io);

  // ---- evaluate ----
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a run file against gold labels");
  pipeline::EvaluateArgs eval_args;
  std::string eval_report;
  std::string eval_convention = "all-labels";
  std::string eval_jaccard = "sample-averaged";
  eval_cmd->add_option("--run", eval_args.run_file, "Run file to score")->required();
  eval_cmd->add_option("--gold", eval_args.gold_csv, "Gold CSV")->required();
  eval_cmd->add_option("--report", eval_report, "Structured report path (default: <run>.report.json)");
  eval_cmd->add_option("--macro-convention", eval_convention,
                       "Labels with no gold and no predictions: all-labels counts them as 0, "
                       "present-only skips them")
      ->check(CLI::IsMember({"all-labels", "present-only"}))
      ->capture_default_str();
  eval_cmd->add_option("--jaccard-variant", eval_jaccard,
                       "sample-averaged (per tweet) or label-averaged (per label)")
      ->check(CLI::IsMember({"sample-averaged", "label-averaged"}))
      ->capture_default_str();
  add_io_flags(eval_cmd, eval_args.io);

  // ---- summarize ----
  auto* sum_cmd = app.add_subcommand("summarize", "Label statistics for a gold corpus");
  pipeline::SummarizeArgs sum_args;
  std::string sum_report;
  sum_cmd->add_option("--train", sum_args.corpus_csv, "Corpus CSV with gold labels")->required();
  sum_cmd->add_option("--report", sum_report, "Structured summary path (default: <corpus>.summary.json)");
  add_io_flags(sum_cmd, sum_args.io);

  std::vector<std::string> args(argv + 1, argv + argc);
  apply_env_overrides(args);
  try {
    // CLI11 consumes arguments in reverse.
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train_cmd) {
      pipeline::cmd_train(train_args, std::cout);
    } else if (*predict_cmd) {
      pipeline::cmd_predict(predict_args, std::cout);
    } else if (*zs_cmd) {
      if (!zs_endpoint.empty()) zs_args.endpoint_url = zs_endpoint;
      if (!zs_transcript.empty()) zs_args.run.transcript_path = zs_transcript;
      if (!zs_replay.empty()) zs_args.run.replay_path = zs_replay;
      if (!zs_cache_dir.empty()) zs_args.run.cache_dir = zs_cache_dir;
      if (!zs_prompt_template.empty()) {
        zs_args.run.prompt_template = PromptTemplate::load(zs_prompt_template);
      }
      if (!zs_label_config.empty()) zs_args.io.label_config = zs_label_config;
      zs_args.run.parse_mode = zs_parse_mode == "strict" ? ParseMode::strict : ParseMode::lenient;
      zs_args.endpoint_timeout = std::chrono::seconds(zs_timeout_s);
      zs_args.run.min_request_interval = std::chrono::milliseconds(zs_min_interval_ms);
      if (!zs_args.endpoint_url && !zs_args.run.replay_path) {
        throw ConfigError("either --endpoint or --replay is required");
      }
      pipeline::cmd_zeroshot(zs_args, std::cout);
    } else if (*eval_cmd) {
      if (!eval_report.empty()) eval_args.report_out = eval_report;
      eval_args.options.convention = eval_convention == "present-only"
                                         ? MacroConvention::present_only
                                         : MacroConvention::all_labels;
      eval_args.options.jaccard_variant = eval_jaccard == "label-averaged"
                                              ? JaccardVariant::label_averaged
                                              : JaccardVariant::sample_averaged;
      pipeline::cmd_evaluate(eval_args, std::cout);
    } else if (*sum_cmd) {
      if (!sum_report.empty()) sum_args.report_out = sum_report;
      pipeline::cmd_summarize(sum_args, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}
