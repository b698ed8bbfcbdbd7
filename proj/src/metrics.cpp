#include "vaxkit/metrics.hpp"

#include <iomanip>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "vaxkit/errors.hpp"

namespace vaxkit {

namespace {

void require_pairs(std::span<const PredictionPair> pairs) {
  if (pairs.empty()) throw EmptyEvaluationError();
}

void require_non_empty_sets(std::span<const PredictionPair> pairs) {
  std::vector<std::string> offenders;
  for (const auto& p : pairs) {
    if (p.predicted.empty() || p.gold.empty()) offenders.push_back(p.id);
  }
  if (!offenders.empty()) {
    throw InvariantViolationError("prediction pairs must have non-empty predicted and gold sets",
                                  std::move(offenders));
  }
}

double f1_from(const LabelConfusion& c) {
  const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
  return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / denom;
}

}  // namespace

std::array<LabelConfusion, kLabelCount> per_label_confusion(std::span<const PredictionPair> pairs) {
  require_pairs(pairs);
  std::array<LabelConfusion, kLabelCount> out{};
  for (const auto& pair : pairs) {
    for (Label l : canonical_labels()) {
      const bool in_pred = pair.predicted.contains(l);
      const bool in_gold = pair.gold.contains(l);
      auto& c = out[label_index(l)];
      if (in_pred && in_gold) ++c.tp;
      else if (in_pred) ++c.fp;
      else if (in_gold) ++c.fn;
    }
  }
  return out;
}

double macro_f1(std::span<const PredictionPair> pairs, MacroConvention convention) {
  const auto confusion = per_label_confusion(pairs);
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& c : confusion) {
    if (convention == MacroConvention::present_only && c.tp + c.fp + c.fn == 0) continue;
    sum += f1_from(c);
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

double jaccard_similarity(std::span<const PredictionPair> pairs, JaccardVariant variant) {
  require_pairs(pairs);
  if (variant == JaccardVariant::label_averaged) {
    const auto confusion = per_label_confusion(pairs);
    double sum = 0.0;
    for (const auto& c : confusion) {
      const double denom = static_cast<double>(c.tp + c.fp + c.fn);
      sum += denom == 0.0 ? 0.0 : static_cast<double>(c.tp) / denom;
    }
    return sum / static_cast<double>(kLabelCount);
  }
  require_non_empty_sets(pairs);
  double sum = 0.0;
  for (const auto& pair : pairs) {
    const double inter = static_cast<double>((pair.predicted & pair.gold).size());
    const double uni = static_cast<double>((pair.predicted | pair.gold).size());
    sum += inter / uni;
  }
  return sum / static_cast<double>(pairs.size());
}

EvaluationReport evaluate(std::span<const PredictionPair> pairs, const EvaluateOptions& options) {
  require_pairs(pairs);
  require_non_empty_sets(pairs);
  std::unordered_set<std::string> ids;
  for (const auto& p : pairs) {
    if (!ids.insert(p.id).second) throw DuplicateIdError(p.id);
  }

  EvaluationReport report;
  report.pair_count = pairs.size();
  report.convention = options.convention;
  report.jaccard_variant = options.jaccard_variant;

  const auto confusion = per_label_confusion(pairs);
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    const auto& c = confusion[i];
    auto& s = report.per_label[i];
    s.precision = (c.tp + c.fp) == 0 ? 0.0
                                     : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    s.recall = (c.tp + c.fn) == 0 ? 0.0
                                  : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    s.f1 = f1_from(c);
    s.support = c.tp + c.fn;
  }
  report.macro_f1 = macro_f1(pairs, options.convention);
  report.jaccard = jaccard_similarity(pairs, options.jaccard_variant);
  return report;
}

std::string report_table(const EvaluationReport& report, std::string_view method_tag) {
  std::ostringstream out;
  std::size_t tag_width = std::max<std::size_t>(6, method_tag.size());
  out << std::left << std::setw(static_cast<int>(tag_width)) << "Method"
      << "  Macro-F1  Jaccard\n";
  out << std::left << std::setw(static_cast<int>(tag_width)) << method_tag << "  "
      << std::right << std::setw(8) << std::fixed << std::setprecision(2) << report.macro_f1
      << "  " << std::setw(7) << report.jaccard << "\n\n";

  std::size_t name_width = 5;
  for (Label l : canonical_labels()) name_width = std::max(name_width, label_name(l).size());
  out << std::left << std::setw(static_cast<int>(name_width)) << "label"
      << "  precision  recall  f1      support\n";
  out << std::setprecision(4);
  for (Label l : canonical_labels()) {
    const auto& s = report.per_label[label_index(l)];
    out << std::left << std::setw(static_cast<int>(name_width)) << label_name(l) << "  "
        << std::right << std::setw(9) << s.precision << "  " << std::setw(6) << s.recall << "  "
        << std::setw(6) << s.f1 << "  " << std::setw(7) << s.support << '\n';
  }
  return out.str();
}

std::string report_json(const EvaluationReport& report, std::string_view method_tag) {
  nlohmann::json per_label = nlohmann::json::object();
  for (Label l : canonical_labels()) {
    const auto& s = report.per_label[label_index(l)];
    per_label[std::string(label_name(l))] = {
        {"precision", s.precision},
        {"recall", s.recall},
        {"f1", s.f1},
        {"support", s.support},
    };
  }
  const nlohmann::json j = {
      {"method", std::string(method_tag)},
      {"macro_f1", report.macro_f1},
      {"jaccard", report.jaccard},
      {"pair_count", report.pair_count},
      {"macro_convention", std::string(to_string(report.convention))},
      {"jaccard_variant", std::string(to_string(report.jaccard_variant))},
      {"per_label", per_label},
  };
  return j.dump(2) + "\n";
}

std::string_view to_string(MacroConvention convention) {
  return convention == MacroConvention::all_labels ? "all-labels" : "present-only";
}

std::string_view to_string(JaccardVariant variant) {
  return variant == JaccardVariant::sample_averaged ? "sample-averaged" : "label-averaged";
}

}  // namespace vaxkit
