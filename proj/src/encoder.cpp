#include "vaxkit/encoder.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "vaxkit/errors.hpp"
#include "vaxkit/hashing.hpp"

namespace vaxkit {

void EncoderBackend::accumulate_parameter_gradient(std::string_view, std::span<const double>,
                                                   std::span<double>) {}

std::vector<std::string> tokenize_basic(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

constexpr std::uint64_t kProjectionSeed = 0x76617863ULL;  // fixed, never changes

std::vector<double> fixed_projection(std::size_t dim) {
  SplitMix64 rng(kProjectionSeed + dim);
  std::vector<double> p(dim * dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double& v : p) v = rng.next_symmetric() * scale;
  return p;
}

bool all_whitespace(std::string_view text) {
  for (unsigned char c : text) {
    if (!std::isspace(c)) return false;
  }
  return true;
}

}  // namespace

HashEncoder::HashEncoder(std::size_t dim, std::size_t max_input_tokens,
                         std::string_view name_prefix) {
  if (dim == 0) throw ConfigError("encoder dimension must be >= 1");
  if (max_input_tokens == 0) throw ConfigError("max_input_tokens must be >= 1");
  spec_.model_name = std::string(name_prefix) + "-" + std::to_string(dim);
  spec_.embedding_dim = dim;
  spec_.max_input_tokens = max_input_tokens;
  projection_ = fixed_projection(dim);
}

std::vector<double> HashEncoder::pooled_token_vector(std::string_view text) const {
  if (text.empty() || all_whitespace(text)) {
    throw TokenizationFailureError("text is empty or whitespace-only");
  }
  const std::size_t dim = spec_.embedding_dim;
  std::vector<double> pooled(dim, 0.0);
  auto tokens = tokenize_basic(text);
  if (tokens.size() > spec_.max_input_tokens) tokens.resize(spec_.max_input_tokens);
  if (tokens.empty()) return pooled;  // punctuation-only text maps to the zero vector
  for (const auto& token : tokens) {
    SplitMix64 rng(fnv1a64(token));
    for (std::size_t i = 0; i < dim; ++i) pooled[i] += rng.next_symmetric();
  }
  const double inv = 1.0 / static_cast<double>(tokens.size());
  for (double& v : pooled) v *= inv;
  return pooled;
}

std::vector<double> HashEncoder::encode(std::string_view text) {
  const std::size_t dim = spec_.embedding_dim;
  const std::vector<double> pooled = pooled_token_vector(text);
  const std::span<const double> p = projection();
  std::vector<double> out(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) acc += p[i * dim + j] * pooled[j];
    out[i] = acc;
  }
  return out;
}

TrainableHashEncoder::TrainableHashEncoder(std::size_t dim, std::size_t max_input_tokens)
    : HashEncoder(dim, max_input_tokens, "test-trainable") {}

void TrainableHashEncoder::accumulate_parameter_gradient(std::string_view text,
                                                         std::span<const double> grad_embedding,
                                                         std::span<double> grad_out) {
  const std::size_t dim = spec_.embedding_dim;
  if (grad_embedding.size() != dim) throw DimensionMismatchError(dim, grad_embedding.size());
  if (grad_out.size() != projection_.size()) {
    throw DimensionMismatchError(projection_.size(), grad_out.size());
  }
  // embedding = P * pooled, so dL/dP[i][j] = grad_embedding[i] * pooled[j].
  const std::vector<double> pooled = pooled_token_vector(text);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      grad_out[i * dim + j] += grad_embedding[i] * pooled[j];
    }
  }
}

std::optional<EncoderBackendSpec> known_backend_spec(std::string_view name) {
  if (name == "bert-large-uncased") return EncoderBackendSpec{std::string(name), 1024, 512};
  if (name == "hatexplain" || name == "bert-base-uncased-hatexplain") {
    return EncoderBackendSpec{std::string(name), 768, 512};
  }
  return std::nullopt;
}

namespace {

std::optional<std::size_t> parse_dim_suffix(std::string_view name, std::string_view prefix) {
  if (!name.starts_with(prefix)) return std::nullopt;
  const std::string_view digits = name.substr(prefix.size());
  if (digits.empty()) return std::nullopt;
  std::size_t dim = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dim);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  if (dim == 0 || dim > 4096) return std::nullopt;
  return dim;
}

}  // namespace

std::shared_ptr<EncoderBackend> make_backend(std::string_view name) {
  if (auto dim = parse_dim_suffix(name, "test-trainable-")) {
    return std::make_shared<TrainableHashEncoder>(*dim);
  }
  if (auto dim = parse_dim_suffix(name, "test-")) {
    return std::make_shared<HashEncoder>(*dim);
  }
  if (known_backend_spec(name)) {
    throw BackendUnavailableError(
        std::string(name) +
        " names a published checkpoint whose weights are not bundled; plug in an encoder "
        "via the Python API or use a test-* backend");
  }
  throw ConfigError("unknown encoder backend \"" + std::string(name) + "\"");
}

}  // namespace vaxkit
