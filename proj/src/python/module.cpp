#include <pybind11/chrono.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vaxkit/classifier.hpp"
#include "vaxkit/corpus.hpp"
#include "vaxkit/errors.hpp"
#include "vaxkit/labels.hpp"
#include "vaxkit/llm.hpp"
#include "vaxkit/metrics.hpp"
#include "vaxkit/pipeline.hpp"
#include "vaxkit/prompt.hpp"
#include "vaxkit/runfile.hpp"
#include "vaxkit/version.hpp"

namespace py = pybind11;
using namespace vaxkit;

namespace {

// Python sees label sets as sets of identifier strings.
py::set labelset_to_py(LabelSet set) {
  py::set out;
  for (Label l : set.to_vector()) out.add(py::str(std::string(label_name(l))));
  return out;
}

LabelSet labelset_from_py(const py::iterable& names) {
  LabelSet out;
  for (const auto& item : names) {
    const std::string name = py::cast<std::string>(item);
    const auto label = label_from_token(name);
    if (!label) throw UnknownLabelError(name);
    out.insert(*label);
  }
  return out;
}

/// Trampoline so encoder backends can be written in Python (e.g. wrapping a
/// real transformer checkpoint).
class PyEncoderBackend : public EncoderBackend {
 public:
  using EncoderBackend::EncoderBackend;

  const EncoderBackendSpec& spec() const override {
    PYBIND11_OVERRIDE_PURE(const EncoderBackendSpec&, EncoderBackend, spec);
  }
  std::vector<double> encode(std::string_view text) override {
    PYBIND11_OVERRIDE_PURE(std::vector<double>, EncoderBackend, encode, std::string(text));
  }
  std::string pooling() const override {
    PYBIND11_OVERRIDE(std::string, EncoderBackend, pooling);
  }
  bool trainable() const override { PYBIND11_OVERRIDE(bool, EncoderBackend, trainable); }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "vaxkit core: multi-label vaccine-concern classification";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "VaxkitError");

  // ---- labels ----
  m.def("canonical_labels", [] {
    std::vector<std::string> out;
    for (Label l : canonical_labels()) out.emplace_back(label_name(l));
    return out;
  });
  m.def(
      "parse_label_string",
      [](const std::string& raw, const std::string& delimiter) {
        return labelset_to_py(parse_label_string(raw, delimiter));
      },
      py::arg("raw"), py::arg("delimiter") = " ");
  m.def(
      "serialize_label_set",
      [](const py::iterable& labels, const std::string& delimiter) {
        return serialize_label_set(labelset_from_py(labels), delimiter);
      },
      py::arg("labels"), py::arg("delimiter") = " ");
  m.def("to_multi_hot", [](const py::iterable& labels) {
    const auto bits = to_multi_hot(labelset_from_py(labels));
    return std::vector<int>(bits.begin(), bits.end());
  });
  m.def("from_multi_hot", [](const std::vector<int>& bits) {
    return labelset_to_py(from_multi_hot(bits));
  });
  m.def("normalize_prediction", [](const py::iterable& labels) {
    return labelset_to_py(normalize_prediction(labelset_from_py(labels)));
  });

  py::class_<LabelMeta>(m, "LabelMeta")
      .def(py::init([](const std::string& id, const std::string& description,
                       const std::vector<std::string>& keywords) {
             const auto label = label_from_token(id);
             if (!label) throw UnknownLabelError(id);
             return LabelMeta{*label, description, keywords};
           }),
           py::arg("id"), py::arg("description"), py::arg("keywords") = std::vector<std::string>{})
      .def_property_readonly("id", [](const LabelMeta& meta) { return std::string(label_name(meta.id)); })
      .def_readwrite("description", &LabelMeta::description)
      .def_readwrite("keywords", &LabelMeta::keywords);
  m.def("default_label_metas", [] {
    const auto& table = default_label_metas();
    return std::vector<LabelMeta>(table.begin(), table.end());
  });
  m.def("load_label_metas", [](const std::filesystem::path& path) {
    const auto table = load_label_metas(path);
    return std::vector<LabelMeta>(table.begin(), table.end());
  });

  // ---- corpus ----
  py::class_<TweetRecord>(m, "TweetRecord")
      .def(py::init([](const std::string& id, const std::string& text, const py::object& gold) {
             TweetRecord r{id, text, std::nullopt};
             if (!gold.is_none()) r.gold = labelset_from_py(gold);
             return r;
           }),
           py::arg("id"), py::arg("text"), py::arg("gold") = py::none())
      .def_readwrite("id", &TweetRecord::id)
      .def_readwrite("text", &TweetRecord::text)
      .def_property(
          "gold",
          [](const TweetRecord& r) -> py::object {
            return r.gold ? py::object(labelset_to_py(*r.gold)) : py::none();
          },
          [](TweetRecord& r, const py::object& gold) {
            r.gold = gold.is_none() ? std::nullopt : std::optional<LabelSet>(labelset_from_py(gold));
          })
      .def("__repr__", [](const TweetRecord& r) {
        return "TweetRecord(id=" + r.id + ")";
      });

  py::class_<CsvSchema>(m, "CsvSchema")
      .def(py::init<>())
      .def_readwrite("id_column", &CsvSchema::id_column)
      .def_readwrite("text_column", &CsvSchema::text_column)
      .def_readwrite("label_column", &CsvSchema::label_column)
      .def_readwrite("has_header", &CsvSchema::has_header);

  m.def("load_csv", &load_csv, py::arg("path"), py::arg("has_gold"),
        py::arg("label_delimiter") = " ", py::arg("schema") = CsvSchema{});
  m.def("write_csv", &write_csv, py::arg("records"), py::arg("path"),
        py::arg("label_delimiter") = " ", py::arg("schema") = CsvSchema{});

  py::class_<CorpusSummary>(m, "CorpusSummary")
      .def_readonly("record_count", &CorpusSummary::record_count)
      .def_readonly("multi_label_fraction", &CorpusSummary::multi_label_fraction)
      .def_property_readonly("per_label_counts", [](const CorpusSummary& s) {
        py::dict out;
        for (Label l : canonical_labels()) {
          out[py::str(std::string(label_name(l)))] = s.per_label_counts[label_index(l)];
        }
        return out;
      });
  m.def("summarize", &summarize);
  m.def("summary_table", &summary_table);

  // ---- encoder / classifier ----
  py::class_<EncoderBackendSpec>(m, "EncoderBackendSpec")
      .def(py::init<const std::string&, std::size_t, std::size_t>(), py::arg("model_name"),
           py::arg("embedding_dim"), py::arg("max_input_tokens") = 512)
      .def_readwrite("model_name", &EncoderBackendSpec::model_name)
      .def_readwrite("embedding_dim", &EncoderBackendSpec::embedding_dim)
      .def_readwrite("max_input_tokens", &EncoderBackendSpec::max_input_tokens);

  py::class_<EncoderBackend, PyEncoderBackend, std::shared_ptr<EncoderBackend>>(m, "EncoderBackend")
      .def(py::init<>())
      .def("spec", &EncoderBackend::spec, py::return_value_policy::reference_internal)
      .def("encode",
           [](EncoderBackend& b, const std::string& text) { return b.encode(text); })
      .def("pooling", &EncoderBackend::pooling)
      .def("trainable", &EncoderBackend::trainable);
  m.def("make_backend", [](const std::string& name) { return make_backend(name); });
  m.def("known_backend_spec", &known_backend_spec);

  py::class_<TrainingConfig>(m, "TrainingConfig")
      .def(py::init<>())
      .def_readwrite("epochs", &TrainingConfig::epochs)
      .def_readwrite("batch_size", &TrainingConfig::batch_size)
      .def_readwrite("learning_rate", &TrainingConfig::learning_rate)
      .def_readwrite("threshold", &TrainingConfig::threshold)
      .def_readwrite("seed", &TrainingConfig::seed)
      .def_readwrite("shuffle_each_epoch", &TrainingConfig::shuffle_each_epoch)
      .def_readwrite("freeze_encoder", &TrainingConfig::freeze_encoder)
      .def("validate", &TrainingConfig::validate);

  py::class_<EpochLoss>(m, "EpochLoss")
      .def_readonly("epoch", &EpochLoss::epoch)
      .def_readonly("mean_loss", &EpochLoss::mean_loss);

  py::class_<ClassifierState>(m, "ClassifierState")
      .def_property_readonly("backend", [](const ClassifierState& s) { return s.backend; })
      .def_property_readonly("pooling", [](const ClassifierState& s) { return s.pooling; })
      .def_property_readonly("training_log",
                             [](const ClassifierState& s) { return s.training_log; })
      .def_property_readonly("trained_with_frozen_encoder",
                             [](const ClassifierState& s) { return s.trained_with_frozen_encoder; });

  m.def("train", &train, py::arg("records"), py::arg("backend"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "train", [](const std::vector<TweetRecord>& records, const std::string& backend,
                  const TrainingConfig& config) {
        auto b = make_backend(backend);
        return train(records, *b, config);
      },
      py::arg("records"), py::arg("backend"), py::arg("config"));
  m.def("predict_probabilities",
        [](const ClassifierState& state, EncoderBackend& backend, const std::string& text) {
          const auto p = predict_probabilities(state, backend, text);
          return std::vector<double>(p.begin(), p.end());
        });
  m.def("threshold_labels", [](const std::vector<double>& probabilities, double threshold) {
    if (probabilities.size() != kLabelCount) {
      throw DimensionMismatchError(kLabelCount, probabilities.size());
    }
    std::array<double, kLabelCount> p{};
    std::copy(probabilities.begin(), probabilities.end(), p.begin());
    return labelset_to_py(threshold_labels(p, threshold));
  });
  m.def("predict",
        [](const ClassifierState& state, EncoderBackend& backend, const std::string& text,
           double threshold) { return labelset_to_py(predict(state, backend, text, threshold)); },
        py::arg("state"), py::arg("backend"), py::arg("text"), py::arg("threshold") = 0.5);
  m.def("save_state", &save_state);
  m.def("load_state", &load_state);
  m.def("make_backend_for", &make_backend_for);

  // ---- prompt / parsing ----
  py::class_<DecodingParams>(m, "DecodingParams")
      .def(py::init<>())
      .def_readwrite("temperature", &DecodingParams::temperature)
      .def_readwrite("max_tokens", &DecodingParams::max_tokens)
      .def_readwrite("stop", &DecodingParams::stop)
      .def("validate", &DecodingParams::validate);

  py::class_<PromptTemplate>(m, "PromptTemplate")
      .def_static("builtin", [] { return PromptTemplate::builtin(); })
      .def_static("load", &PromptTemplate::load)
      .def_readwrite("version", &PromptTemplate::version)
      .def_readwrite("system_template", &PromptTemplate::system_template)
      .def_readwrite("user_template", &PromptTemplate::user_template)
      .def_readwrite("label_line", &PromptTemplate::label_line);

  py::class_<PromptBundle>(m, "PromptBundle")
      .def_readonly("system_text", &PromptBundle::system_text)
      .def_readonly("user_text", &PromptBundle::user_text)
      .def_readonly("model_name", &PromptBundle::model_name)
      .def_readonly("params", &PromptBundle::params);

  m.def(
      "build_prompt",
      [](const std::string& tweet, const std::vector<LabelMeta>& metas,
         const DecodingParams& params, const std::string& model_name, const py::object& tmpl) {
        LabelMetaTable table;
        if (metas.size() != kLabelCount) {
          throw ConfigError("expected exactly 12 label metas, got " + std::to_string(metas.size()));
        }
        std::copy(metas.begin(), metas.end(), table.begin());
        const PromptTemplate& t =
            tmpl.is_none() ? PromptTemplate::builtin() : py::cast<const PromptTemplate&>(tmpl);
        return build_prompt(tweet, table, params, model_name, t);
      },
      py::arg("tweet"), py::arg("metas"), py::arg("params") = DecodingParams{},
      py::arg("model_name") = "gpt-3.5-turbo", py::arg("template") = py::none());

  py::enum_<ParseMode>(m, "ParseMode")
      .value("lenient", ParseMode::lenient)
      .value("strict", ParseMode::strict);
  m.def(
      "parse_response",
      [](const std::string& raw, ParseMode mode) { return labelset_to_py(parse_response(raw, mode)); },
      py::arg("raw"), py::arg("mode") = ParseMode::lenient);

  // ---- metrics ----
  py::class_<PredictionPair>(m, "PredictionPair")
      .def(py::init([](const std::string& id, const py::iterable& predicted,
                       const py::iterable& gold) {
             return PredictionPair{id, labelset_from_py(predicted), labelset_from_py(gold)};
           }),
           py::arg("id"), py::arg("predicted"), py::arg("gold"))
      .def_readwrite("id", &PredictionPair::id)
      .def_property(
          "predicted",
          [](const PredictionPair& p) { return labelset_to_py(p.predicted); },
          [](PredictionPair& p, const py::iterable& v) { p.predicted = labelset_from_py(v); })
      .def_property(
          "gold", [](const PredictionPair& p) { return labelset_to_py(p.gold); },
          [](PredictionPair& p, const py::iterable& v) { p.gold = labelset_from_py(v); });

  py::enum_<MacroConvention>(m, "MacroConvention")
      .value("all_labels", MacroConvention::all_labels)
      .value("present_only", MacroConvention::present_only);
  py::enum_<JaccardVariant>(m, "JaccardVariant")
      .value("sample_averaged", JaccardVariant::sample_averaged)
      .value("label_averaged", JaccardVariant::label_averaged);

  m.def(
      "macro_f1",
      [](const std::vector<PredictionPair>& pairs, MacroConvention convention) {
        return macro_f1(pairs, convention);
      },
      py::arg("pairs"), py::arg("convention") = MacroConvention::all_labels);
  m.def(
      "jaccard_similarity",
      [](const std::vector<PredictionPair>& pairs, JaccardVariant variant) {
        return jaccard_similarity(pairs, variant);
      },
      py::arg("pairs"), py::arg("variant") = JaccardVariant::sample_averaged);

  py::class_<PerLabelStats>(m, "PerLabelStats")
      .def_readonly("precision", &PerLabelStats::precision)
      .def_readonly("recall", &PerLabelStats::recall)
      .def_readonly("f1", &PerLabelStats::f1)
      .def_readonly("support", &PerLabelStats::support);

  py::class_<EvaluationReport>(m, "EvaluationReport")
      .def_readonly("macro_f1", &EvaluationReport::macro_f1)
      .def_readonly("jaccard", &EvaluationReport::jaccard)
      .def_readonly("pair_count", &EvaluationReport::pair_count)
      .def_property_readonly("per_label", [](const EvaluationReport& r) {
        py::dict out;
        for (Label l : canonical_labels()) {
          out[py::str(std::string(label_name(l)))] = r.per_label[label_index(l)];
        }
        return out;
      });

  m.def(
      "evaluate",
      [](const std::vector<PredictionPair>& pairs, MacroConvention convention,
         JaccardVariant variant) {
        return evaluate(pairs, EvaluateOptions{convention, variant});
      },
      py::arg("pairs"), py::arg("convention") = MacroConvention::all_labels,
      py::arg("variant") = JaccardVariant::sample_averaged);
  m.def("report_table", &report_table, py::arg("report"), py::arg("method_tag"));

  // ---- run files ----
  py::class_<RunFile>(m, "RunFile")
      .def(py::init<>())
      .def_readwrite("method_tag", &RunFile::method_tag)
      .def_property(
          "rows",
          [](const RunFile& run) {
            py::list out;
            for (const auto& [id, labels] : run.rows) {
              out.append(py::make_tuple(id, labelset_to_py(labels)));
            }
            return out;
          },
          [](RunFile& run, const py::iterable& rows) {
            run.rows.clear();
            for (const auto& item : rows) {
              auto pair = py::cast<py::tuple>(item);
              run.rows.emplace_back(py::cast<std::string>(pair[0]),
                                    labelset_from_py(py::cast<py::iterable>(pair[1])));
            }
          });
  m.def("write_run", &write_run, py::arg("run"), py::arg("path"),
        py::arg("label_delimiter") = " ");
  m.def("read_run", &read_run, py::arg("path"), py::arg("label_delimiter") = " ");
}
