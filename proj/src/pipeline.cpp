#include "vaxkit/pipeline.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

#include "vaxkit/errors.hpp"
#include "vaxkit/runfile.hpp"
#include "vaxkit/version.hpp"

namespace vaxkit::pipeline {

namespace {

nlohmann::json io_json(const IoOptions& io) {
  return {
      {"label_delimiter", io.label_delimiter},
      {"id_column", io.schema.id_column},
      {"text_column", io.schema.text_column},
      {"label_column", io.schema.label_column},
      {"has_header", io.schema.has_header},
      {"label_config", io.label_config ? io.label_config->string() : ""},
  };
}

LabelMetaTable metas_for(const IoOptions& io) {
  return io.label_config ? load_label_metas(*io.label_config) : default_label_metas();
}

/// Writes the manifest, marking failure, then rethrows.
template <typename Fn>
void guarded(RunManifest& manifest, const std::filesystem::path& manifest_path, Fn&& body) {
  manifest.started_at = now_iso8601_utc();
  try {
    body();
    manifest.success = true;
    manifest.finished_at = now_iso8601_utc();
    write_manifest(manifest, manifest_path);
  } catch (const std::exception& e) {
    manifest.success = false;
    manifest.error = e.what();
    manifest.finished_at = now_iso8601_utc();
    try {
      write_manifest(manifest, manifest_path);
    } catch (...) {
      // Surface the original failure, not the manifest write.
    }
    throw;
  }
}

void remove_if_exists(const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::remove(path, ec);
}

}  // namespace

TrainOutcome cmd_train(const TrainArgs& args, std::ostream& out) {
  RunManifest manifest;
  manifest.subcommand = "train";
  manifest.toolkit_version = kVersion;
  manifest.seed = args.config.seed;
  manifest.inputs["train_csv"] = args.train_csv.string();
  manifest.outputs["checkpoint"] = args.out_checkpoint.string();
  manifest.config = io_json(args.io);
  manifest.config["backend"] = args.backend;
  manifest.config["epochs"] = args.config.epochs;
  manifest.config["batch_size"] = args.config.batch_size;
  manifest.config["learning_rate"] = args.config.learning_rate;
  manifest.config["threshold"] = args.config.threshold;
  manifest.config["shuffle_each_epoch"] = args.config.shuffle_each_epoch;
  manifest.config["freeze_encoder"] = args.config.freeze_encoder;

  const auto manifest_path = manifest_path_for(args.out_checkpoint);
  TrainOutcome outcome;
  guarded(manifest, manifest_path, [&] {
    args.config.validate();
    const auto records = load_csv(args.train_csv, /*has_gold=*/true, args.io.label_delimiter,
                                  args.io.schema);
    auto backend = make_backend(args.backend);
    const auto state = train(records, *backend, args.config);
    save_state(state, args.out_checkpoint);
    outcome.training_log = state.training_log;

    out << "trained on " << records.size() << " records, " << state.training_log.size()
        << " epochs\n";
    const std::size_t n = state.training_log.size();
    out << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < n; ++i) {
      // Full log for short runs, first/last few otherwise.
      if (n <= 12 || i < 3 || i + 3 >= n) {
        out << "  epoch " << state.training_log[i].epoch << ": mean loss "
            << state.training_log[i].mean_loss << '\n';
      } else if (i == 3) {
        out << "  ...\n";
      }
    }
    out << "checkpoint written to " << args.out_checkpoint.string() << '\n';
    manifest.config["epochs_logged"] = state.training_log.size();
  });
  outcome.checkpoint = args.out_checkpoint;
  outcome.manifest = manifest_path;
  return outcome;
}

PredictOutcome cmd_predict(const PredictArgs& args, std::ostream& out) {
  RunManifest manifest;
  manifest.subcommand = "predict";
  manifest.toolkit_version = kVersion;
  manifest.inputs["test_csv"] = args.test_csv.string();
  manifest.inputs["checkpoint"] = args.checkpoint.string();
  manifest.outputs["run_file"] = args.out_run.string();
  manifest.config = io_json(args.io);
  manifest.config["threshold"] = args.threshold;

  const auto manifest_path = manifest_path_for(args.out_run);
  PredictOutcome outcome;
  try {
    guarded(manifest, manifest_path, [&] {
      const auto records = load_csv(args.test_csv, args.input_has_gold, args.io.label_delimiter,
                                    args.io.schema);
      const auto state = load_state(args.checkpoint);
      auto backend = make_backend_for(state);
      manifest.config["backend"] = state.backend.model_name;
      manifest.config["frozen_encoder_at_train"] = state.trained_with_frozen_encoder;

      RunFile run;
      run.method_tag = args.run_tag.empty() ? args.out_run.stem().string() : args.run_tag;
      for (const auto& r : records) {
        run.rows.emplace_back(r.id, predict(state, *backend, r.text, args.threshold));
      }
      write_run(run, args.out_run, args.io.label_delimiter);
      outcome.row_count = run.rows.size();
      out << "wrote " << run.rows.size() << " predictions to " << args.out_run.string() << '\n';
    });
  } catch (...) {
    remove_if_exists(args.out_run);
    throw;
  }
  outcome.run_file = args.out_run;
  outcome.manifest = manifest_path;
  return outcome;
}

ZeroShotOutcome cmd_zeroshot(const ZeroShotArgs& args, std::ostream& out,
                             ChatEndpoint* endpoint_override) {
  RunManifest manifest;
  manifest.subcommand = "zeroshot";
  manifest.toolkit_version = kVersion;
  manifest.inputs["test_csv"] = args.test_csv.string();
  manifest.outputs["run_file"] = args.out_run.string();
  manifest.config = io_json(args.io);
  manifest.config["model"] = args.run.model_name;
  manifest.config["endpoint"] = args.endpoint_url.value_or("");
  manifest.config["temperature"] = args.run.params.temperature;
  manifest.config["max_tokens"] = args.run.params.max_tokens;
  manifest.config["concurrency"] = args.run.concurrency;
  manifest.config["parse_mode"] =
      args.run.parse_mode == ParseMode::lenient ? "lenient" : "strict";
  manifest.config["retry_max_attempts"] = args.run.retry.max_attempts;
  if (args.run.transcript_path) {
    manifest.outputs["transcript"] = args.run.transcript_path->string();
  }
  if (args.run.replay_path) manifest.inputs["replay"] = args.run.replay_path->string();
  if (args.run.cache_dir) manifest.config["cache_dir"] = args.run.cache_dir->string();

  const auto manifest_path = manifest_path_for(args.out_run);
  ZeroShotOutcome outcome;
  guarded(manifest, manifest_path, [&] {
    const auto records = load_csv(args.test_csv, args.input_has_gold, args.io.label_delimiter,
                                  args.io.schema);
    ZeroShotRunOptions run_options = args.run;
    run_options.metas = metas_for(args.io);
    if (run_options.run_tag == "zeroshot") {
      run_options.run_tag = args.out_run.stem().string();
    }

    std::unique_ptr<HttpChatEndpoint> http;
    ChatEndpoint* endpoint = endpoint_override;
    if (!endpoint && args.endpoint_url) {
      HttpChatEndpoint::Options options;
      options.base_url = *args.endpoint_url;
      options.timeout = args.endpoint_timeout;
      http = std::make_unique<HttpChatEndpoint>(options);
      endpoint = http.get();
    }

    const auto result = run_zeroshot(records, endpoint, run_options);
    write_run(result.run, args.out_run, args.io.label_delimiter);
    outcome.row_count = result.run.rows.size();
    outcome.served_from_transcript = result.served_from_transcript;
    out << "classified " << result.run.rows.size() << " tweets ("
        << result.served_from_transcript << " served from transcript), run file: "
        << args.out_run.string() << '\n';
  });
  outcome.run_file = args.out_run;
  outcome.manifest = manifest_path;
  outcome.transcript = args.run.transcript_path;
  return outcome;
}

EvaluateOutcome cmd_evaluate(const EvaluateArgs& args, std::ostream& out) {
  RunManifest manifest;
  manifest.subcommand = "evaluate";
  manifest.toolkit_version = kVersion;
  manifest.inputs["run_file"] = args.run_file.string();
  manifest.inputs["gold_csv"] = args.gold_csv.string();
  manifest.config = io_json(args.io);
  manifest.config["macro_convention"] = std::string(to_string(args.options.convention));
  manifest.config["jaccard_variant"] = std::string(to_string(args.options.jaccard_variant));

  const auto report_path =
      args.report_out.value_or([&] {
        std::filesystem::path p = args.run_file;
        p += ".report.json";
        return p;
      }());
  manifest.outputs["report"] = report_path.string();

  const auto manifest_path = manifest_path_for(report_path);
  EvaluateOutcome outcome;
  guarded(manifest, manifest_path, [&] {
    const auto run = read_run(args.run_file, args.io.label_delimiter);
    const auto gold_records = load_csv(args.gold_csv, /*has_gold=*/true, args.io.label_delimiter,
                                       args.io.schema);

    std::map<std::string, LabelSet> gold_by_id;
    for (const auto& r : gold_records) gold_by_id.emplace(r.id, *r.gold);

    std::set<std::string> run_ids;
    for (const auto& [id, _] : run.rows) run_ids.insert(id);
    std::vector<std::string> missing, extra;
    for (const auto& [id, labels] : gold_by_id) {
      if (!run_ids.contains(id)) missing.push_back(id);
    }
    for (const auto& id : run_ids) {
      if (!gold_by_id.contains(id)) extra.push_back(id);
    }
    if (!missing.empty() || !extra.empty()) {
      throw IdMismatchError(std::move(missing), std::move(extra));
    }

    std::vector<PredictionPair> pairs;
    pairs.reserve(run.rows.size());
    for (const auto& [id, predicted] : run.rows) {
      pairs.push_back({id, predicted, gold_by_id.at(id)});
    }

    outcome.report = evaluate(pairs, args.options);
    out << report_table(outcome.report, run.method_tag);

    std::ofstream report_file(report_path, std::ios::binary);
    if (!report_file) throw IoFailureError("cannot write report: " + report_path.string());
    report_file << report_json(outcome.report, run.method_tag);
  });
  outcome.report_path = report_path;
  outcome.manifest = manifest_path;
  return outcome;
}

SummarizeOutcome cmd_summarize(const SummarizeArgs& args, std::ostream& out) {
  RunManifest manifest;
  manifest.subcommand = "summarize";
  manifest.toolkit_version = kVersion;
  manifest.inputs["corpus_csv"] = args.corpus_csv.string();
  manifest.config = io_json(args.io);

  const auto report_path =
      args.report_out.value_or([&] {
        std::filesystem::path p = args.corpus_csv;
        p += ".summary.json";
        return p;
      }());
  manifest.outputs["summary"] = report_path.string();

  const auto manifest_path = manifest_path_for(report_path);
  SummarizeOutcome outcome;
  guarded(manifest, manifest_path, [&] {
    const auto records = load_csv(args.corpus_csv, /*has_gold=*/true, args.io.label_delimiter,
                                  args.io.schema);
    outcome.summary = summarize(records);
    out << summary_table(outcome.summary);

    nlohmann::json per_label = nlohmann::json::object();
    for (Label l : canonical_labels()) {
      per_label[std::string(label_name(l))] = outcome.summary.per_label_counts[label_index(l)];
    }
    const nlohmann::json j = {
        {"record_count", outcome.summary.record_count},
        {"multi_label_fraction", outcome.summary.multi_label_fraction},
        {"per_label_counts", per_label},
    };
    std::ofstream report_file(report_path, std::ios::binary);
    if (!report_file) throw IoFailureError("cannot write summary: " + report_path.string());
    report_file << j.dump(2) << '\n';
  });
  outcome.report_path = report_path;
  outcome.manifest = manifest_path;
  return outcome;
}

}  // namespace vaxkit::pipeline
