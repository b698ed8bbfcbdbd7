#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vaxkit/corpus.hpp"
#include "vaxkit/encoder.hpp"
#include "vaxkit/labels.hpp"

namespace vaxkit {

struct TrainingConfig {
  int epochs = 100;
  int batch_size = 1;
  double learning_rate = 2e-5;
  double threshold = 0.5;
  std::uint64_t seed = 42;
  bool shuffle_each_epoch = true;
  bool freeze_encoder = false;  // train only the dense head

  /// Throws ConfigError on any out-of-range field.
  void validate() const;
};

/// One affine layer mapping an embedding to 12 logits, one per label in
/// canonical order. Weights start at zero (sigmoid outputs 0.5 everywhere).
class DenseHead {
 public:
  explicit DenseHead(std::size_t embedding_dim);

  std::size_t embedding_dim() const { return dim_; }

  std::array<double, kLabelCount> logits(std::span<const double> embedding) const;
  /// Elementwise sigmoid of the logits; each value strictly in (0, 1).
  std::array<double, kLabelCount> forward(std::span<const double> embedding) const;

  std::span<double> weights() { return weights_; }             // 12 x dim, row-major
  std::span<const double> weights() const { return weights_; }
  std::span<double> bias() { return bias_; }
  std::span<const double> bias() const { return bias_; }

  double& weight_at(std::size_t label, std::size_t k) { return weights_[label * dim_ + k]; }

 private:
  std::size_t dim_;
  std::vector<double> weights_;
  std::array<double, kLabelCount> bias_{};
};

/// Mean per-label binary cross-entropy, computed from logits in a
/// numerically stable form.
double bce_loss(const std::array<double, kLabelCount>& logits,
                const std::array<int, kLabelCount>& target);

struct HeadGradients {
  std::vector<double> weights;  // 12 x dim
  std::array<double, kLabelCount> bias{};

  explicit HeadGradients(std::size_t dim) : weights(kLabelCount * dim, 0.0) {}
  void reset();
};

/// Accumulates analytic gradients of bce_loss into `grads` and writes
/// d(loss)/d(embedding) into `grad_embedding` (same length as embedding).
/// Returns the loss.
double bce_backward(const DenseHead& head, std::span<const double> embedding,
                    const std::array<int, kLabelCount>& target, HeadGradients& grads,
                    std::span<double> grad_embedding);

struct EpochLoss {
  int epoch = 0;  // 1-based
  double mean_loss = 0.0;

  bool operator==(const EpochLoss&) const = default;
};

struct ClassifierState {
  EncoderBackendSpec backend;
  std::string pooling;
  DenseHead head{1};
  std::vector<double> encoder_params;  // snapshot of fine-tuned encoder parameters, if any
  std::vector<EpochLoss> training_log;
  bool trained_with_frozen_encoder = false;
};

/// Trains the dense head (and the encoder parameters, unless the backend is
/// frozen or has none) with per-label BCE and adaptive-moment gradient
/// descent. Deterministic for a fixed seed, config, data order, and
/// deterministic backend.
ClassifierState train(const std::vector<TweetRecord>& records, EncoderBackend& backend,
                      const TrainingConfig& config);

std::array<double, kLabelCount> predict_probabilities(const ClassifierState& state,
                                                      EncoderBackend& backend,
                                                      std::string_view text);

/// Labels whose probability >= threshold, before the none/empty fallback.
LabelSet threshold_labels(const std::array<double, kLabelCount>& probabilities, double threshold);

/// threshold_labels + normalize_prediction.
LabelSet predict(const ClassifierState& state, EncoderBackend& backend, std::string_view text,
                 double threshold);

/// Versioned binary checkpoint (magic, version, spec, weight tensors,
/// CRC-32). Round-trips bit-exactly.
void save_state(const ClassifierState& state, const std::filesystem::path& path);
ClassifierState load_state(const std::filesystem::path& path);

/// Rebuilds the backend named in the checkpoint and restores fine-tuned
/// encoder parameters when present.
std::shared_ptr<EncoderBackend> make_backend_for(const ClassifierState& state);

}  // namespace vaxkit
