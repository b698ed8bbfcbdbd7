#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vaxkit/labels.hpp"

namespace vaxkit {

struct PredictionPair {
  std::string id;
  LabelSet predicted;
  LabelSet gold;
};

struct LabelConfusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  bool operator==(const LabelConfusion&) const = default;
};

/// Per-label true/false positive and false negative counts over all pairs.
std::array<LabelConfusion, kLabelCount> per_label_confusion(std::span<const PredictionPair> pairs);

/// How labels with zero gold occurrences and zero predictions enter the
/// macro mean: counted as 0 (default) or skipped.
enum class MacroConvention { all_labels, present_only };

enum class JaccardVariant { sample_averaged, label_averaged };

/// Unweighted mean of per-label F1 = 2*tp / (2*tp + fp + fn), 0 when the
/// denominator is 0.
double macro_f1(std::span<const PredictionPair> pairs,
                MacroConvention convention = MacroConvention::all_labels);

/// sample_averaged: mean over pairs of |pred ∩ gold| / |pred ∪ gold|.
/// label_averaged: mean over labels of tp / (tp + fp + fn), 0 when absent.
double jaccard_similarity(std::span<const PredictionPair> pairs,
                          JaccardVariant variant = JaccardVariant::sample_averaged);

struct PerLabelStats {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold occurrences (tp + fn)
};

struct EvaluationReport {
  double macro_f1 = 0.0;
  double jaccard = 0.0;
  std::array<PerLabelStats, kLabelCount> per_label{};
  std::size_t pair_count = 0;
  MacroConvention convention = MacroConvention::all_labels;
  JaccardVariant jaccard_variant = JaccardVariant::sample_averaged;
};

struct EvaluateOptions {
  MacroConvention convention = MacroConvention::all_labels;
  JaccardVariant jaccard_variant = JaccardVariant::sample_averaged;
};

/// Assembles the full report. Pair ids must be unique; every predicted and
/// gold set must be non-empty.
EvaluationReport evaluate(std::span<const PredictionPair> pairs,
                          const EvaluateOptions& options = {});

/// One headline row (method, Macro-F1, Jaccard at 2 decimals) followed by
/// the per-label table.
std::string report_table(const EvaluationReport& report, std::string_view method_tag);

/// Full-precision structured report (JSON text).
std::string report_json(const EvaluationReport& report, std::string_view method_tag);

std::string_view to_string(MacroConvention convention);
std::string_view to_string(JaccardVariant variant);

}  // namespace vaxkit
