#include "relgraph/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <unordered_map>

namespace relgraph {

namespace {

constexpr char kMagic[8] = {'R', 'G', 'C', 'K', 'P', 'T', '0', '1'};
constexpr int32_t kVersion = 1;

void put_bytes(std::ostream& out, const void* data, size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

void put_i32(std::ostream& out, int32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((static_cast<uint32_t>(v) >> (8 * i)) & 0xff);
  put_bytes(out, b, 4);
}

void put_u8(std::ostream& out, uint8_t v) { put_bytes(out, &v, 1); }

void put_f64(std::ostream& out, double d) {
  uint64_t bits;
  std::memcpy(&bits, &d, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  put_bytes(out, b, 8);
}

void get_bytes(std::istream& in, void* data, size_t n, const char* what) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in.gcount()) != n)
    throw SchemaError("checkpoint", std::string("truncated while reading ") + what);
}

int32_t get_i32(std::istream& in, const char* what) {
  unsigned char b[4];
  get_bytes(in, b, 4, what);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return static_cast<int32_t>(v);
}

uint8_t get_u8(std::istream& in, const char* what) {
  uint8_t v;
  get_bytes(in, &v, 1, what);
  return v;
}

double get_f64(std::istream& in, const char* what) {
  unsigned char b[8];
  get_bytes(in, b, 8, what);
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[i]) << (8 * i);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

void save_checkpoint(PnaModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");

  put_bytes(out, kMagic, sizeof(kMagic));
  put_i32(out, kVersion);
  const ModelConfig& c = model.config;
  put_i32(out, c.feature_width);
  put_u8(out, c.use_target_mask ? 1 : 0);
  put_i32(out, c.channels);
  put_i32(out, c.towers);
  put_i32(out, c.layers);
  put_i32(out, c.head_hidden1);
  put_i32(out, c.head_hidden2);
  put_f64(out, c.agg_eps);
  put_f64(out, c.bn_eps);
  put_f64(out, c.bn_momentum);
  put_u8(out, c.mean_readout ? 1 : 0);
  put_f64(out, model.delta);

  int32_t count = 0;
  model.for_each_state([&](const std::string&, Tensor&) { ++count; });
  put_i32(out, count);
  model.for_each_state([&](const std::string& name, Tensor& t) {
    put_i32(out, static_cast<int32_t>(name.size()));
    put_bytes(out, name.data(), name.size());
    put_i32(out, t.rows);
    put_i32(out, t.cols);
    for (double d : t.v) put_f64(out, d);
  });
  if (!out) throw IoError("failed while writing '" + path + "'");
}

PnaModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  char magic[8];
  get_bytes(in, magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw SchemaError("checkpoint", "bad magic; not a model checkpoint");
  int32_t version = get_i32(in, "version");
  if (version != kVersion)
    throw SchemaError("checkpoint", "unsupported version " + std::to_string(version));

  ModelConfig c;
  c.feature_width = get_i32(in, "feature_width");
  c.use_target_mask = get_u8(in, "use_target_mask") != 0;
  c.channels = get_i32(in, "channels");
  c.towers = get_i32(in, "towers");
  c.layers = get_i32(in, "layers");
  c.head_hidden1 = get_i32(in, "head_hidden1");
  c.head_hidden2 = get_i32(in, "head_hidden2");
  c.agg_eps = get_f64(in, "agg_eps");
  c.bn_eps = get_f64(in, "bn_eps");
  c.bn_momentum = get_f64(in, "bn_momentum");
  c.mean_readout = get_u8(in, "mean_readout") != 0;
  double delta = get_f64(in, "delta");

  PnaModel model = PnaModel::init(c, delta, 0);

  int32_t count = get_i32(in, "tensor count");
  std::unordered_map<std::string, Tensor> loaded;
  for (int32_t i = 0; i < count; ++i) {
    int32_t name_len = get_i32(in, "tensor name length");
    if (name_len < 1 || name_len > 4096)
      throw SchemaError("checkpoint", "implausible tensor name length");
    std::string name(static_cast<size_t>(name_len), '\0');
    get_bytes(in, name.data(), name.size(), "tensor name");
    Tensor t;
    t.rows = get_i32(in, "tensor rows");
    t.cols = get_i32(in, "tensor cols");
    if (t.rows < 0 || t.cols < 0) throw SchemaError("checkpoint", "negative tensor shape");
    t.v.resize(static_cast<size_t>(t.rows) * static_cast<size_t>(t.cols));
    for (double& d : t.v) d = get_f64(in, "tensor data");
    if (!loaded.emplace(std::move(name), std::move(t)).second)
      throw SchemaError("checkpoint", "duplicate tensor name");
  }

  int32_t expected = 0;
  model.for_each_state([&](const std::string&, Tensor&) { ++expected; });
  if (count != expected)
    throw SchemaError("checkpoint", "tensor count does not match the configuration");
  model.for_each_state([&](const std::string& name, Tensor& t) {
    auto it = loaded.find(name);
    if (it == loaded.end()) throw SchemaError("checkpoint", "missing tensor '" + name + "'");
    if (!it->second.same_shape(t))
      throw SchemaError("checkpoint", "tensor '" + name + "' has the wrong shape");
    t = std::move(it->second);
  });
  return model;
}

}  // namespace relgraph
