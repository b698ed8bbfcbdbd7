#include <bit>
#include <cstring>
#include <fstream>

#include "vaxkit/classifier.hpp"
#include "vaxkit/errors.hpp"
#include "vaxkit/hashing.hpp"

namespace vaxkit {

// Checkpoint container, version 1:
//   "VXKT" | u32 version | u64 payload_size | payload | u32 crc32(payload)
// All integers little-endian; doubles stored as their IEEE-754 bit patterns.

namespace {

constexpr char kMagic[4] = {'V', 'X', 'K', 'T'};
constexpr std::uint32_t kVersion = 1;

class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  const std::vector<unsigned char>& bytes() const { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    const auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t len = u32();
    const auto b = take(len);
    return std::string(reinterpret_cast<const char*>(b.data()), b.size());
  }
  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  std::span<const unsigned char> take(std::size_t count) {
    if (pos_ + count > bytes_.size()) {
      throw ChecksumMismatchError("payload shorter than its declared contents");
    }
    const auto out = bytes_.subspan(pos_, count);
    pos_ += count;
    return out;
  }

  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_state(const ClassifierState& state, const std::filesystem::path& path) {
  ByteWriter payload;
  payload.str(state.backend.model_name);
  payload.u32(static_cast<std::uint32_t>(state.backend.embedding_dim));
  payload.u32(static_cast<std::uint32_t>(state.backend.max_input_tokens));
  payload.str(state.pooling);
  payload.u8(state.trained_with_frozen_encoder ? 1 : 0);
  payload.u32(kLabelCount);
  for (double w : state.head.weights()) payload.f64(w);
  for (double b : state.head.bias()) payload.f64(b);
  payload.u64(state.encoder_params.size());
  for (double p : state.encoder_params) payload.f64(p);
  payload.u32(static_cast<std::uint32_t>(state.training_log.size()));
  for (const auto& entry : state.training_log) {
    payload.u32(static_cast<std::uint32_t>(entry.epoch));
    payload.f64(entry.mean_loss);
  }

  ByteWriter file;
  file.u8(kMagic[0]);
  file.u8(kMagic[1]);
  file.u8(kMagic[2]);
  file.u8(kMagic[3]);
  file.u32(kVersion);
  file.u64(payload.bytes().size());

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailureError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(file.bytes().data()),
            static_cast<std::streamsize>(file.bytes().size()));
  out.write(reinterpret_cast<const char*>(payload.bytes().data()),
            static_cast<std::streamsize>(payload.bytes().size()));
  ByteWriter trailer;
  trailer.u32(crc32(payload.bytes()));
  out.write(reinterpret_cast<const char*>(trailer.bytes().data()), 4);
  out.flush();
  if (!out) throw IoFailureError("write failed: " + path.string());
}

ClassifierState load_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailureError("cannot open: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoFailureError("read failed: " + path.string());

  // magic(4) + version(4) + payload_size(8) + crc(4)
  if (bytes.size() < 20) throw ChecksumMismatchError("file too short to be a checkpoint");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ChecksumMismatchError("bad magic bytes");
  }

  ByteReader header(std::span(bytes).subspan(4, 12));
  const std::uint32_t version = header.u32();
  if (version != kVersion) throw VersionMismatchError(kVersion, version);
  const std::uint64_t payload_size = header.u64();
  if (bytes.size() != 16 + payload_size + 4) {
    throw ChecksumMismatchError("file length does not match the declared payload size");
  }

  const auto payload = std::span(bytes).subspan(16, payload_size);
  ByteReader trailer(std::span(bytes).subspan(16 + payload_size, 4));
  if (trailer.u32() != crc32(payload)) {
    throw ChecksumMismatchError("crc32 does not match payload");
  }

  ByteReader r(payload);
  ClassifierState state;
  state.backend.model_name = r.str();
  state.backend.embedding_dim = r.u32();
  state.backend.max_input_tokens = r.u32();
  state.pooling = r.str();
  state.trained_with_frozen_encoder = r.u8() != 0;
  const std::uint32_t label_count = r.u32();
  if (label_count != kLabelCount) {
    throw ChecksumMismatchError("checkpoint trained for " + std::to_string(label_count) +
                                " labels, expected " + std::to_string(kLabelCount));
  }
  if (state.backend.embedding_dim == 0) {
    throw ChecksumMismatchError("checkpoint declares embedding_dim 0");
  }
  state.head = DenseHead(state.backend.embedding_dim);
  for (double& w : state.head.weights()) w = r.f64();
  for (double& b : state.head.bias()) b = r.f64();
  const std::uint64_t param_count = r.u64();
  state.encoder_params.resize(param_count);
  for (double& p : state.encoder_params) p = r.f64();
  const std::uint32_t log_count = r.u32();
  state.training_log.resize(log_count);
  for (auto& entry : state.training_log) {
    entry.epoch = static_cast<int>(r.u32());
    entry.mean_loss = r.f64();
  }
  if (!r.exhausted()) throw ChecksumMismatchError("trailing bytes after checkpoint payload");
  return state;
}

}  // namespace vaxkit
