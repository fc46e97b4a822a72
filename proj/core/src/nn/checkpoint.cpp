#include "ugk/nn/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "ugk/csv.hpp"

namespace ugk::nn {
namespace {

constexpr std::string_view kMagic = "UGK1";

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void raw(std::string_view s) { out_.append(s); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string_view raw(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw Error(ErrorCode::Format, "checkpoint truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const CheckpointData& data) {
  Writer w;
  w.raw(kMagic);
  w.str(data.config_hash);
  w.str(data.graph_hash);
  w.f64(data.target_mean);
  w.f64(data.target_scale);
  w.u32(static_cast<std::uint32_t>(data.parameters.size()));
  for (const auto& p : data.parameters) {
    if (p.values.size() != p.rows * p.cols) throw Error(ErrorCode::ShapeMismatch, "bad stored array " + p.name);
    w.str(p.name);
    w.u32(static_cast<std::uint32_t>(p.rows));
    w.u32(static_cast<std::uint32_t>(p.cols));
  }
  for (const auto& p : data.parameters) {
    for (double v : p.values) w.f64(v);
  }
  w.u64(data.adam.step);
  const bool has_moments = !data.adam.m.empty();
  w.u8(has_moments ? 1 : 0);
  if (has_moments) {
    if (data.adam.m.size() != data.parameters.size() || data.adam.v.size() != data.parameters.size()) {
      throw Error(ErrorCode::ShapeMismatch, "optimizer state does not match parameter table");
    }
    for (const auto* moments : {&data.adam.m, &data.adam.v}) {
      for (std::size_t i = 0; i < moments->size(); ++i) {
        if ((*moments)[i].size() != data.parameters[i].values.size()) {
          throw Error(ErrorCode::ShapeMismatch, "optimizer moment size mismatch");
        }
        for (double v : (*moments)[i]) w.f64(v);
      }
    }
  }
  return w.take();
}

CheckpointData decode_checkpoint(std::string_view bytes) {
  Reader r(bytes);
  if (r.raw(kMagic.size()) != kMagic) throw Error(ErrorCode::Format, "not a ugk checkpoint (bad magic)");
  CheckpointData data;
  data.config_hash = r.str();
  data.graph_hash = r.str();
  data.target_mean = r.f64();
  data.target_scale = r.f64();
  const std::uint32_t count = r.u32();
  data.parameters.resize(count);
  for (auto& p : data.parameters) {
    p.name = r.str();
    p.rows = r.u32();
    p.cols = r.u32();
  }
  for (auto& p : data.parameters) {
    p.values.resize(p.rows * p.cols);
    for (double& v : p.values) v = r.f64();
  }
  data.adam.step = r.u64();
  if (r.u8() != 0) {
    for (auto* moments : {&data.adam.m, &data.adam.v}) {
      moments->resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        (*moments)[i].resize(data.parameters[i].values.size());
        for (double& v : (*moments)[i]) v = r.f64();
      }
    }
  }
  if (!r.done()) throw Error(ErrorCode::Format, "trailing bytes after checkpoint");
  return data;
}

void write_checkpoint(const std::filesystem::path& path, const CheckpointData& data) {
  write_text_file(path, encode_checkpoint(data));
}

CheckpointData read_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_text_file(path)); }

CheckpointData capture_checkpoint(const ParameterSet& params, const Adam* adam) {
  CheckpointData data;
  for (const auto& p : params.entries()) {
    data.parameters.push_back(
        {p.name, p.tensor.rows(), p.tensor.cols(), std::vector<double>(p.tensor.data().begin(), p.tensor.data().end())});
  }
  if (adam) data.adam = adam->state();
  return data;
}

void load_parameters(ParameterSet& params, const CheckpointData& data) {
  auto& entries = params.entries();
  if (entries.size() != data.parameters.size()) {
    throw Error(ErrorCode::ShapeMismatch, "checkpoint has " + std::to_string(data.parameters.size()) +
                                              " parameters, model expects " + std::to_string(entries.size()));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& stored = data.parameters[i];
    Tensor& t = entries[i].tensor;
    if (stored.name != entries[i].name || stored.rows != t.rows() || stored.cols != t.cols()) {
      throw Error(ErrorCode::ShapeMismatch, "checkpoint parameter " + stored.name + " (" + std::to_string(stored.rows) +
                                                "x" + std::to_string(stored.cols) + ") does not fit " +
                                                entries[i].name);
    }
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto dst = entries[i].tensor.mutable_data();
    std::copy(data.parameters[i].values.begin(), data.parameters[i].values.end(), dst.begin());
  }
}

}  // namespace ugk::nn
