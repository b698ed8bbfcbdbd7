#include "vaxkit/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vaxkit/errors.hpp"
#include "vaxkit/hashing.hpp"

namespace vaxkit {

void TrainingConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must be in (0, 1)");
}

DenseHead::DenseHead(std::size_t embedding_dim)
    : dim_(embedding_dim), weights_(kLabelCount * embedding_dim, 0.0) {
  if (embedding_dim == 0) throw ConfigError("embedding dimension must be >= 1");
}

std::array<double, kLabelCount> DenseHead::logits(std::span<const double> embedding) const {
  if (embedding.size() != dim_) throw DimensionMismatchError(dim_, embedding.size());
  std::array<double, kLabelCount> out{};
  for (std::size_t j = 0; j < kLabelCount; ++j) {
    double acc = bias_[j];
    const double* row = weights_.data() + j * dim_;
    for (std::size_t k = 0; k < dim_; ++k) acc += row[k] * embedding[k];
    out[j] = acc;
  }
  return out;
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

std::array<double, kLabelCount> DenseHead::forward(std::span<const double> embedding) const {
  auto z = logits(embedding);
  for (double& v : z) v = sigmoid(v);
  return z;
}

double bce_loss(const std::array<double, kLabelCount>& logits,
                const std::array<int, kLabelCount>& target) {
  // Per label: max(z,0) - z*y + log(1 + exp(-|z|)); mean over the 12 labels.
  double sum = 0.0;
  for (std::size_t j = 0; j < kLabelCount; ++j) {
    const double z = logits[j];
    const double y = static_cast<double>(target[j]);
    sum += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
  }
  return sum / static_cast<double>(kLabelCount);
}

void HeadGradients::reset() {
  std::fill(weights.begin(), weights.end(), 0.0);
  bias.fill(0.0);
}

double bce_backward(const DenseHead& head, std::span<const double> embedding,
                    const std::array<int, kLabelCount>& target, HeadGradients& grads,
                    std::span<double> grad_embedding) {
  const std::size_t dim = head.embedding_dim();
  if (embedding.size() != dim) throw DimensionMismatchError(dim, embedding.size());
  if (!grad_embedding.empty() && grad_embedding.size() != dim) {
    throw DimensionMismatchError(dim, grad_embedding.size());
  }
  const auto logits = head.logits(embedding);
  const double loss = bce_loss(logits, target);

  // dL/dz_j = (sigmoid(z_j) - y_j) / 12
  std::array<double, kLabelCount> dz{};
  for (std::size_t j = 0; j < kLabelCount; ++j) {
    dz[j] = (sigmoid(logits[j]) - static_cast<double>(target[j])) /
            static_cast<double>(kLabelCount);
  }
  for (std::size_t j = 0; j < kLabelCount; ++j) {
    double* wrow = grads.weights.data() + j * dim;
    for (std::size_t k = 0; k < dim; ++k) wrow[k] += dz[j] * embedding[k];
    grads.bias[j] += dz[j];
  }
  if (!grad_embedding.empty()) {
    const auto w = head.weights();
    for (std::size_t k = 0; k < dim; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < kLabelCount; ++j) acc += w[j * dim + k] * dz[j];
      grad_embedding[k] += acc;
    }
  }
  return loss;
}

namespace {

/// Adam over a flat parameter vector.
class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t size, double lr)
      : lr_(lr), m_(size, 0.0), v_(size, 0.0) {}

  void step(std::span<double> params, std::span<const double> grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(kBeta1, t_);
    const double bc2 = 1.0 - std::pow(kBeta2, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double g = grads[i];
      m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * g;
      v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * g * g;
      const double mhat = m_[i] / bc1;
      const double vhat = v_[i] / bc2;
      params[i] -= lr_ * mhat / (std::sqrt(vhat) + kEps);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  double lr_;
  int t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

void deterministic_shuffle(std::vector<std::size_t>& order, SplitMix64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

ClassifierState train(const std::vector<TweetRecord>& records, EncoderBackend& backend,
                      const TrainingConfig& config) {
  config.validate();
  if (records.empty()) throw ConfigError("training corpus is empty");
  for (const auto& r : records) {
    if (!r.gold) throw MissingGoldError(r.id);
  }

  const std::size_t dim = backend.spec().embedding_dim;
  const std::size_t n = records.size();
  const bool train_encoder = !config.freeze_encoder && backend.trainable();

  std::vector<std::array<int, kLabelCount>> targets;
  targets.reserve(n);
  for (const auto& r : records) targets.push_back(to_multi_hot(*r.gold));

  // With the encoder fixed, each text encodes to the same vector all run;
  // cache those up front.
  std::vector<std::vector<double>> embedding_cache;
  if (!train_encoder) {
    embedding_cache.reserve(n);
    for (const auto& r : records) embedding_cache.push_back(backend.encode(r.text));
  }

  ClassifierState state;
  state.backend = backend.spec();
  state.pooling = backend.pooling();
  state.head = DenseHead(dim);
  state.trained_with_frozen_encoder = config.freeze_encoder;

  const std::size_t head_size = kLabelCount * dim + kLabelCount;
  const std::size_t encoder_size = train_encoder ? backend.parameters().size() : 0;
  AdamOptimizer optimizer(head_size + encoder_size, config.learning_rate);

  std::vector<double> flat_grads(head_size + encoder_size, 0.0);
  std::vector<double> flat_params(head_size + encoder_size, 0.0);
  HeadGradients grads(dim);
  std::vector<double> grad_embedding(train_encoder ? dim : 0);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 shuffle_rng(config.seed);

  const std::size_t batch = static_cast<std::size_t>(config.batch_size);
  std::size_t step = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle_each_epoch) deterministic_shuffle(order, shuffle_rng);
    double loss_sum = 0.0;

    for (std::size_t begin = 0; begin < n; begin += batch) {
      const std::size_t end = std::min(begin + batch, n);
      grads.reset();
      std::fill(flat_grads.begin(), flat_grads.end(), 0.0);
      for (std::size_t pos = begin; pos < end; ++pos) {
        ++step;
        const std::size_t idx = order[pos];
        std::vector<double> fresh;
        const std::vector<double>& embedding =
            train_encoder ? (fresh = backend.encode(records[idx].text)) : embedding_cache[idx];
        if (train_encoder) std::fill(grad_embedding.begin(), grad_embedding.end(), 0.0);
        const double loss = bce_backward(state.head, embedding, targets[idx], grads,
                                         train_encoder ? std::span<double>(grad_embedding)
                                                       : std::span<double>{});
        if (!std::isfinite(loss)) throw NonFiniteLossError(epoch, step);
        loss_sum += loss;
        if (train_encoder) {
          backend.accumulate_parameter_gradient(
              records[idx].text, grad_embedding,
              std::span<double>(flat_grads).subspan(head_size, encoder_size));
        }
      }

      // Mean over the batch, then one optimizer step over all parameters.
      const double inv = 1.0 / static_cast<double>(end - begin);
      std::copy(grads.weights.begin(), grads.weights.end(), flat_grads.begin());
      std::copy(grads.bias.begin(), grads.bias.end(), flat_grads.begin() + kLabelCount * dim);
      for (std::size_t i = 0; i < head_size + encoder_size; ++i) flat_grads[i] *= inv;

      auto head_w = state.head.weights();
      auto head_b = state.head.bias();
      std::copy(head_w.begin(), head_w.end(), flat_params.begin());
      std::copy(head_b.begin(), head_b.end(), flat_params.begin() + kLabelCount * dim);
      if (train_encoder) {
        auto enc = backend.parameters();
        std::copy(enc.begin(), enc.end(), flat_params.begin() + head_size);
      }
      optimizer.step(flat_params, flat_grads);
      std::copy(flat_params.begin(), flat_params.begin() + kLabelCount * dim, head_w.begin());
      std::copy(flat_params.begin() + kLabelCount * dim, flat_params.begin() + head_size,
                head_b.begin());
      if (train_encoder) {
        auto enc = backend.parameters();
        std::copy(flat_params.begin() + head_size, flat_params.end(), enc.begin());
      }
    }

    state.training_log.push_back({epoch, loss_sum / static_cast<double>(n)});
  }

  if (train_encoder) {
    const auto enc = backend.parameters();
    state.encoder_params.assign(enc.begin(), enc.end());
  }
  return state;
}

std::array<double, kLabelCount> predict_probabilities(const ClassifierState& state,
                                                      EncoderBackend& backend,
                                                      std::string_view text) {
  if (backend.spec().embedding_dim != state.head.embedding_dim()) {
    throw DimensionMismatchError(state.head.embedding_dim(), backend.spec().embedding_dim);
  }
  return state.head.forward(backend.encode(text));
}

LabelSet threshold_labels(const std::array<double, kLabelCount>& probabilities, double threshold) {
  LabelSet out;
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (probabilities[i] >= threshold) out.insert(static_cast<Label>(i));
  }
  return out;
}

LabelSet predict(const ClassifierState& state, EncoderBackend& backend, std::string_view text,
                 double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must be in (0, 1)");
  return normalize_prediction(threshold_labels(predict_probabilities(state, backend, text), threshold));
}

std::shared_ptr<EncoderBackend> make_backend_for(const ClassifierState& state) {
  auto backend = make_backend(state.backend.model_name);
  if (backend->spec().embedding_dim != state.backend.embedding_dim) {
    throw BackendUnavailableError("backend \"" + state.backend.model_name +
                                  "\" resolved with embedding_dim " +
                                  std::to_string(backend->spec().embedding_dim) +
                                  " but the checkpoint expects " +
                                  std::to_string(state.backend.embedding_dim));
  }
  if (!state.encoder_params.empty()) {
    auto params = backend->parameters();
    if (params.size() != state.encoder_params.size()) {
      throw BackendUnavailableError("checkpoint carries " +
                                    std::to_string(state.encoder_params.size()) +
                                    " encoder parameters but backend \"" +
                                    state.backend.model_name + "\" exposes " +
                                    std::to_string(params.size()));
    }
    std::copy(state.encoder_params.begin(), state.encoder_params.end(), params.begin());
  }
  return backend;
}

}  // namespace vaxkit
