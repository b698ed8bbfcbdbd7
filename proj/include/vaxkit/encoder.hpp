#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vaxkit {

struct EncoderBackendSpec {
  std::string model_name;
  std::size_t embedding_dim = 0;
  std::size_t max_input_tokens = 512;

  bool operator==(const EncoderBackendSpec&) const = default;
};

/// A pretrained (or synthetic) text encoder: tokenize, truncate to
/// max_input_tokens, return one pooled embedding of embedding_dim reals.
///
/// Backends that expose parameters() can be fine-tuned end to end; the
/// default is a frozen feature extractor. Subclassable from Python.
class EncoderBackend {
 public:
  virtual ~EncoderBackend() = default;

  virtual const EncoderBackendSpec& spec() const = 0;

  /// Deterministic for fixed parameters. Throws TokenizationFailureError
  /// when `text` is empty or whitespace-only.
  virtual std::vector<double> encode(std::string_view text) = 0;

  /// Short tag describing how token states are pooled; recorded in
  /// checkpoints for reproducibility.
  virtual std::string pooling() const { return "pooled"; }

  virtual bool trainable() const { return false; }
  virtual std::span<double> parameters() { return {}; }

  /// Accumulates d(loss)/d(params) into `grad_out` given d(loss)/d(embedding)
  /// for `text`, evaluated at the current parameters. No-op by default.
  virtual void accumulate_parameter_gradient(std::string_view text,
                                             std::span<const double> grad_embedding,
                                             std::span<double> grad_out);
};

/// Lowercased maximal alphanumeric runs.
std::vector<std::string> tokenize_basic(std::string_view text);

/// Deterministic synthetic encoder: each token hashes to a fixed dim-sized
/// vector, token vectors are mean-pooled, and a fixed projection mixes the
/// result. No weights to download; bit-stable across platforms. Registry
/// names: "test-<dim>", e.g. "test-16".
class HashEncoder : public EncoderBackend {
 public:
  explicit HashEncoder(std::size_t dim, std::size_t max_input_tokens = 512,
                       std::string_view name_prefix = "test");

  const EncoderBackendSpec& spec() const override { return spec_; }
  std::vector<double> encode(std::string_view text) override;
  std::string pooling() const override { return "hash-mean+projection"; }

 protected:
  std::vector<double> pooled_token_vector(std::string_view text) const;
  virtual std::span<const double> projection() const { return projection_; }

  EncoderBackendSpec spec_;
  std::vector<double> projection_;  // dim x dim, row-major
};

/// HashEncoder whose projection matrix is trainable; starts from the same
/// fixed values as HashEncoder, so the two agree before any training.
/// Registry names: "test-trainable-<dim>".
class TrainableHashEncoder : public HashEncoder {
 public:
  explicit TrainableHashEncoder(std::size_t dim, std::size_t max_input_tokens = 512);

  std::string pooling() const override { return "hash-mean+trainable-projection"; }
  bool trainable() const override { return true; }
  std::span<double> parameters() override { return projection_; }
  void accumulate_parameter_gradient(std::string_view text,
                                     std::span<const double> grad_embedding,
                                     std::span<double> grad_out) override;
};

/// Specs for well-known published checkpoints the toolkit knows by name but
/// does not bundle.
std::optional<EncoderBackendSpec> known_backend_spec(std::string_view name);

/// Resolves a backend by name: "test-<dim>" and "test-trainable-<dim>"
/// build hash encoders; known published checkpoint names throw
/// BackendUnavailableError (bring your own encoder via the Python API);
/// anything else throws ConfigError.
std::shared_ptr<EncoderBackend> make_backend(std::string_view name);

}  // namespace vaxkit
