#include "senhead/params.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace senhead {

namespace {
constexpr char kMagic[8] = {'S', 'H', 'P', 'S', 'T', 'O', 'R', 'E'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& os, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  require(is.good(), "ParamStore::load: truncated file");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& os, double d) {
  uint64_t bits;
  std::memcpy(&bits, &d, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  require(is.good(), "ParamStore::load: truncated file");
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[i]) << (8 * i);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

void write_record(std::ostream& os, const std::string& name, const Array& a) {
  write_u32(os, static_cast<uint32_t>(name.size()));
  os.write(name.data(), static_cast<std::streamsize>(name.size()));
  write_u32(os, static_cast<uint32_t>(a.shape.size()));
  for (int d : a.shape) write_u32(os, static_cast<uint32_t>(d));
  for (double v : a.data) write_f64(os, v);
}
}  // namespace

Array& ParamStore::create(const std::string& name, std::vector<int> shape) {
  require(!name.empty(), "ParamStore::create: empty name");
  require(name.find('#') == std::string::npos,
          "ParamStore::create: '#' is reserved in parameter names: ", name);
  require(!has(name), "ParamStore::create: duplicate parameter '", name, "'");
  Entry e;
  e.value = Array::zeros(shape);
  e.grad = Array::zeros(shape);
  e.m = Array::zeros(shape);
  e.v = Array::zeros(shape);
  auto [it, ok] = entries_.emplace(name, std::move(e));
  (void)ok;
  return it->second.value;
}

Array& ParamStore::create_uniform(const std::string& name, std::vector<int> shape,
                                  double lo, double hi, Rng& rng) {
  Array& v = create(name, std::move(shape));
  for (auto& x : v.data) x = rng.uniform(lo, hi);
  return v;
}

ParamStore::Entry& ParamStore::entry(const std::string& name) {
  auto it = entries_.find(name);
  require(it != entries_.end(), "ParamStore: unknown parameter '", name, "'");
  return it->second;
}

const ParamStore::Entry& ParamStore::entry(const std::string& name) const {
  auto it = entries_.find(name);
  require(it != entries_.end(), "ParamStore: unknown parameter '", name, "'");
  return it->second;
}

Array& ParamStore::value(const std::string& name) { return entry(name).value; }
const Array& ParamStore::value(const std::string& name) const { return entry(name).value; }
Array& ParamStore::grad(const std::string& name) { return entry(name).grad; }
const Array& ParamStore::grad(const std::string& name) const { return entry(name).grad; }

std::vector<std::string> ParamStore::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

int ParamStore::total_coords() const {
  int n = 0;
  for (const auto& [k, e] : entries_) n += e.value.numel();
  return n;
}

void ParamStore::zero_grads() {
  for (auto& [k, e] : entries_)
    std::fill(e.grad.data.begin(), e.grad.data.end(), 0.0);
}

double ParamStore::grad_global_norm() const {
  double sq = 0.0;
  for (const auto& [k, e] : entries_)
    for (double g : e.grad.data) sq += g * g;
  return std::sqrt(sq);
}

double ParamStore::clip_global_norm(double max_norm) {
  require(max_norm > 0.0, "clip_global_norm: max_norm must be positive, got ", max_norm);
  double norm = grad_global_norm();
  if (norm > max_norm) {
    double scale = max_norm / norm;
    for (auto& [k, e] : entries_)
      for (double& g : e.grad.data) g *= scale;
  }
  return norm;
}

void ParamStore::adam_step(const AdamConfig& cfg) {
  cfg.validate();
  for (auto& [k, e] : entries_) {
    e.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(e.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(e.t));
    for (int i = 0; i < e.value.numel(); ++i) {
      const double g = e.grad.at(i);
      e.m.at(i) = cfg.beta1 * e.m.at(i) + (1.0 - cfg.beta1) * g;
      e.v.at(i) = cfg.beta2 * e.v.at(i) + (1.0 - cfg.beta2) * g * g;
      const double mhat = e.m.at(i) / bc1;
      const double vhat = e.v.at(i) / bc2;
      e.value.at(i) -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

void ParamStore::save(const std::string& path, bool with_opt_state) const {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "ParamStore::save: cannot open '", path, "'");
  os.write(kMagic, 8);
  write_u32(os, kVersion);
  uint32_t n = static_cast<uint32_t>(entries_.size() * (with_opt_state ? 3u : 1u));
  write_u32(os, n);
  for (const auto& [name, e] : entries_) {
    write_record(os, name, e.value);
    if (with_opt_state) {
      write_record(os, name + "#m", e.m);
      Array vt = e.v;
      write_record(os, name + "#v", vt);
      // step counter rides as a length-1 record
      write_record(os, name + "#t", Array::scalar(static_cast<double>(e.t)));
    }
  }
  require(os.good(), "ParamStore::save: write failed for '", path, "'");
}

ParamStore ParamStore::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), "ParamStore::load: cannot open '", path, "'");
  char magic[8];
  is.read(magic, 8);
  require(is.good() && std::memcmp(magic, kMagic, 8) == 0,
          "ParamStore::load: bad magic in '", path, "'");
  uint32_t version = read_u32(is);
  require(version == kVersion, "ParamStore::load: unsupported version ", version);
  uint32_t n = read_u32(is);
  ParamStore store;
  for (uint32_t r = 0; r < n; ++r) {
    uint32_t name_len = read_u32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    require(is.good(), "ParamStore::load: truncated name record");
    uint32_t ndim = read_u32(is);
    require(ndim >= 1 && ndim <= 2, "ParamStore::load: bad rank ", ndim);
    std::vector<int> shape(ndim);
    for (auto& d : shape) d = static_cast<int>(read_u32(is));
    Array a = Array::zeros(shape);
    for (auto& v : a.data) v = read_f64(is);

    auto hash_pos = name.find('#');
    if (hash_pos == std::string::npos) {
      Array& dst = store.create(name, a.shape);
      dst = std::move(a);
    } else {
      std::string base = name.substr(0, hash_pos);
      std::string kind = name.substr(hash_pos + 1);
      Entry& e = store.entry(base);
      if (kind == "m") {
        e.m = std::move(a);
      } else if (kind == "v") {
        e.v = std::move(a);
      } else if (kind == "t") {
        e.t = static_cast<long long>(a.at(0));
      } else {
        fail("ParamStore::load: unknown state record '", name, "'");
      }
    }
  }
  return store;
}

bool ParamStore::operator==(const ParamStore& o) const {
  if (entries_.size() != o.entries_.size()) return false;
  auto a = entries_.begin();
  auto b = o.entries_.begin();
  for (; a != entries_.end(); ++a, ++b) {
    if (a->first != b->first) return false;
    if (a->second.value.shape != b->second.value.shape) return false;
    if (a->second.value.data != b->second.value.data) return false;
    if (a->second.m.data != b->second.m.data) return false;
    if (a->second.v.data != b->second.v.data) return false;
    if (a->second.t != b->second.t) return false;
  }
  return true;
}

}  // namespace senhead
