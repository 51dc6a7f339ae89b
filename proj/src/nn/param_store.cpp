#include "ride/nn/param_store.hpp"

#include <cstring>
#include <fstream>

namespace ride::nn {

namespace {

constexpr char kMagic[8] = {'R', 'I', 'D', 'E', 'C', 'K', 'P', 'T'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<char*>(b), 4);
}

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void write_f32_array(std::ostream& out, const std::vector<float>& v) {
  static_assert(sizeof(float) == 4);
  // Little-endian hosts only; serialize byte by byte to stay explicit.
  for (float f : v) {
    uint32_t u;
    std::memcpy(&u, &f, 4);
    write_u32(out, u);
  }
}

void read_f32_array(std::istream& in, std::vector<float>& v) {
  for (float& f : v) {
    const uint32_t u = read_u32(in);
    std::memcpy(&f, &u, 4);
  }
}

}  // namespace

void save_param_store(const ParamStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_u32(out, kVersion);
  write_u32(out, static_cast<uint32_t>(store.entries.size()));
  for (const auto& e : store.entries) {
    write_u32(out, static_cast<uint32_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    write_u32(out, static_cast<uint32_t>(e.value.shape.size()));
    for (int d : e.value.shape) write_u32(out, static_cast<uint32_t>(d));
  }
  for (const auto& e : store.entries) {
    write_f32_array(out, e.value.data);
    write_f32_array(out, e.rms.data);
    write_f32_array(out, e.momentum.data);
  }
  if (!out) throw IoError("short write on checkpoint: " + path);
}

void load_param_store(ParamStore& store, const std::string& path) {
  ParamStore loaded = load_param_store(path);
  if (!store.same_layout(loaded))
    throw IoError("checkpoint layout does not match the network: " + path);
  store.copy_values_from(loaded);
}

ParamStore load_param_store(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw IoError("not a checkpoint file: " + path);
  const uint32_t version = read_u32(in);
  if (version != kVersion) throw IoError("unsupported checkpoint version in " + path);
  const uint32_t count = read_u32(in);
  ParamStore store;
  for (uint32_t i = 0; i < count; i++) {
    const uint32_t name_len = read_u32(in);
    if (name_len > 4096) throw IoError("corrupt checkpoint: " + path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const uint32_t ndim = read_u32(in);
    if (ndim > 8) throw IoError("corrupt checkpoint: " + path);
    std::vector<int> shape(ndim);
    for (auto& d : shape) d = static_cast<int>(read_u32(in));
    store.add(name, shape);
  }
  for (auto& e : store.entries) {
    read_f32_array(in, e.value.data);
    read_f32_array(in, e.rms.data);
    read_f32_array(in, e.momentum.data);
  }
  if (!in) throw IoError("truncated checkpoint: " + path);
  return store;
}

}  // namespace ride::nn
