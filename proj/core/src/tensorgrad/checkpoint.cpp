#include "pickplace/tensorgrad/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pickplace/errors.hpp"

namespace tensorgrad {

namespace {

constexpr char kMagic[8] = {'P', 'K', 'P', 'L', 'C', 'K', 'P', '1'};

void write_u32(std::ostream& os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw pickplace::IoError("checkpoint: truncated u32");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void write_f32_le(std::ostream& os, const float* data, size_t n) {
  // Little-endian host assumed; asserted at startup by the byte-order check
  // below so files are portable across builds on the same platform class.
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * 4));
}

void check_little_endian() {
  uint32_t probe = 1;
  unsigned char first;
  std::memcpy(&first, &probe, 1);
  if (first != 1)
    throw pickplace::IoError("checkpoint: big-endian hosts are not supported");
}

}  // namespace

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : params)
    if (n == name) return &t;
  return nullptr;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  check_little_endian();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw pickplace::IoError("checkpoint: cannot open for write: " + path);
  os.write(kMagic, sizeof(kMagic));

  nlohmann::json meta(ckpt.meta);
  std::string meta_str = meta.dump();
  write_u32(os, static_cast<uint32_t>(meta_str.size()));
  os.write(meta_str.data(), static_cast<std::streamsize>(meta_str.size()));

  write_u32(os, static_cast<uint32_t>(ckpt.params.size()));
  for (const auto& [name, tensor] : ckpt.params) {
    write_u32(os, static_cast<uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    const auto& shape = tensor.shape();
    write_u32(os, static_cast<uint32_t>(shape.size()));
    for (int d : shape) write_u32(os, static_cast<uint32_t>(d));
    write_f32_le(os, tensor.value().data(), tensor.value().size());
  }
  if (!os) throw pickplace::IoError("checkpoint: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  check_little_endian();
  std::ifstream is(path, std::ios::binary);
  if (!is) throw pickplace::IoError("checkpoint: cannot open: " + path);
  char magic[sizeof(kMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw pickplace::IoError("checkpoint: bad magic in " + path);

  Checkpoint ckpt;
  uint32_t meta_len = read_u32(is);
  std::string meta_str(meta_len, '\0');
  is.read(meta_str.data(), meta_len);
  if (!is) throw pickplace::IoError("checkpoint: truncated metadata");
  nlohmann::json meta = nlohmann::json::parse(meta_str, nullptr, false);
  if (meta.is_discarded() || !meta.is_object())
    throw pickplace::IoError("checkpoint: corrupt metadata JSON");
  for (auto& [k, v] : meta.items()) {
    if (!v.is_string()) throw pickplace::IoError("checkpoint: metadata values must be strings");
    ckpt.meta[k] = v.get<std::string>();
  }

  uint32_t n_params = read_u32(is);
  ckpt.params.reserve(n_params);
  for (uint32_t p = 0; p < n_params; ++p) {
    uint32_t name_len = read_u32(is);
    if (name_len > 4096) throw pickplace::IoError("checkpoint: implausible name length");
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    uint32_t ndim = read_u32(is);
    if (ndim > 8) throw pickplace::IoError("checkpoint: implausible rank");
    Shape shape(ndim);
    int64_t numel = 1;
    for (uint32_t d = 0; d < ndim; ++d) {
      shape[d] = static_cast<int>(read_u32(is));
      if (shape[d] <= 0) throw pickplace::IoError("checkpoint: non-positive dim");
      numel *= shape[d];
    }
    std::vector<float> data(static_cast<size_t>(numel));
    is.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(numel * 4));
    if (!is) throw pickplace::IoError("checkpoint: truncated tensor data for " + name);
    ckpt.params.emplace_back(name, Tensor::from_data(shape, data));
  }
  return ckpt;
}

void restore_params(const Checkpoint& ckpt, std::vector<Tensor>& params) {
  for (auto& p : params) {
    const std::string& name = p.node_ptr()->name;
    const Tensor* src = ckpt.find(name);
    if (!src)
      throw pickplace::IoError("checkpoint: missing parameter '" + name + "'");
    if (src->shape() != p.shape())
      throw pickplace::DimensionError("checkpoint: shape mismatch for '" + name + "': file " +
                                      shape_str(src->shape()) + " vs model " +
                                      shape_str(p.shape()));
    p.node_ptr()->value = src->value();
  }
}

}  // namespace tensorgrad
