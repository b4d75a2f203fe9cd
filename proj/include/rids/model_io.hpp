#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rids/codec.hpp"  // little-endian helpers
#include "rids/forest.hpp"
#include "rids/logreg.hpp"
#include "rids/tree.hpp"

namespace rids {

// Model container: magic "RIDS", u16 format version, u8 model kind, payload.
inline constexpr uint8_t kModelKindLogReg = 0;
inline constexpr uint8_t kModelKindTree = 1;
inline constexpr uint8_t kModelKindForest = 2;
inline constexpr uint16_t kModelFormatVersion = 1;

struct ModelIoError : std::runtime_error {
  explicit ModelIoError(const std::string& what) : std::runtime_error(what) {}
};

using AnyModel = std::variant<LogRegModel, TreeModel, ForestModel>;

namespace model_detail {

using detail::get_u16;
using detail::get_u32;
using detail::get_u64;
using detail::put_u16;
using detail::put_u32;
using detail::put_u64;

inline void put_f64(std::vector<uint8_t>& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

struct Reader {
  std::span<const uint8_t> buf;
  size_t pos = 0;

  void need(size_t n, const char* what) {
    if (buf.size() - pos < n)
      throw ModelIoError(std::string("truncated model file at ") + what);
  }
  uint8_t u8(const char* what) {
    need(1, what);
    return buf[pos++];
  }
  uint16_t u16(const char* what) {
    need(2, what);
    uint16_t v = get_u16(buf, pos);
    pos += 2;
    return v;
  }
  uint32_t u32(const char* what) {
    need(4, what);
    uint32_t v = get_u32(buf, pos);
    pos += 4;
    return v;
  }
  uint64_t u64(const char* what) {
    need(8, what);
    uint64_t v = get_u64(buf, pos);
    pos += 8;
    return v;
  }
  double f64(const char* what) {
    uint64_t bits = u64(what);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
};

inline void put_meta(std::vector<uint8_t>& out, const TrainMeta& m) {
  put_u64(out, m.seed);
  put_u64(out, m.n_samples);
  put_u32(out, m.max_depth);
  put_u32(out, m.min_samples_leaf);
}

inline TrainMeta read_meta(Reader& r) {
  TrainMeta m;
  m.seed = r.u64("meta.seed");
  m.n_samples = r.u64("meta.n_samples");
  m.max_depth = r.u32("meta.max_depth");
  m.min_samples_leaf = r.u32("meta.min_samples_leaf");
  return m;
}

inline void put_tree(std::vector<uint8_t>& out, const TreeModel& t) {
  put_meta(out, t.meta);
  put_u32(out, t.max_depth_used);
  put_u32(out, static_cast<uint32_t>(t.nodes.size()));
  for (const TreeNode& n : t.nodes) {
    out.push_back(n.is_leaf() ? 1 : 0);
    for (uint32_t c : n.counts) put_u32(out, c);
    if (!n.is_leaf()) {
      put_u16(out, n.feature);
      put_f64(out, n.threshold);
      put_u32(out, n.left);
      put_u32(out, n.right);
    }
  }
}

inline TreeModel read_tree(Reader& r) {
  TreeModel t;
  t.meta = read_meta(r);
  t.max_depth_used = r.u32("tree.max_depth_used");
  const uint32_t n_nodes = r.u32("tree.n_nodes");
  if (n_nodes == 0) throw ModelIoError("tree with zero nodes");
  t.nodes.resize(n_nodes);
  for (uint32_t i = 0; i < n_nodes; ++i) {
    TreeNode& n = t.nodes[i];
    const uint8_t leaf = r.u8("node.flag");
    if (leaf > 1) throw ModelIoError("bad node flag");
    for (auto& c : n.counts) c = r.u32("node.counts");
    if (!leaf) {
      n.feature = r.u16("node.feature");
      n.threshold = r.f64("node.threshold");
      n.left = r.u32("node.left");
      n.right = r.u32("node.right");
      // children always follow their parent, which keeps the walk acyclic
      if (n.feature >= kFeatureCount || n.left <= i || n.left >= n_nodes ||
          n.right <= i || n.right >= n_nodes)
        throw ModelIoError("node references out of range");
    }
  }
  return t;
}

}  // namespace model_detail

inline std::vector<uint8_t> serialize_model(const TreeModel& t) {
  std::vector<uint8_t> out{'R', 'I', 'D', 'S'};
  model_detail::put_u16(out, kModelFormatVersion);
  out.push_back(kModelKindTree);
  model_detail::put_tree(out, t);
  return out;
}

inline std::vector<uint8_t> serialize_model(const ForestModel& f) {
  std::vector<uint8_t> out{'R', 'I', 'D', 'S'};
  model_detail::put_u16(out, kModelFormatVersion);
  out.push_back(kModelKindForest);
  model_detail::put_u16(out, f.features_per_split);
  out.push_back(f.bootstrap);
  model_detail::put_u64(out, f.seed);
  model_detail::put_u32(out, static_cast<uint32_t>(f.trees.size()));
  for (const TreeModel& t : f.trees) model_detail::put_tree(out, t);
  return out;
}

inline std::vector<uint8_t> serialize_model(const LogRegModel& m) {
  std::vector<uint8_t> out{'R', 'I', 'D', 'S'};
  model_detail::put_u16(out, kModelFormatVersion);
  out.push_back(kModelKindLogReg);
  model_detail::put_u16(out, static_cast<uint16_t>(m.n_classes));
  model_detail::put_u16(out, static_cast<uint16_t>(m.n_features));
  model_detail::put_meta(out, m.meta);
  for (double v : m.weights) model_detail::put_f64(out, v);
  for (double v : m.bias) model_detail::put_f64(out, v);
  for (double v : m.mean) model_detail::put_f64(out, v);
  for (double v : m.stddev) model_detail::put_f64(out, v);
  return out;
}

inline std::vector<uint8_t> serialize_model(const AnyModel& m) {
  return std::visit([](const auto& model) { return serialize_model(model); }, m);
}

inline AnyModel deserialize_model(std::span<const uint8_t> buf) {
  model_detail::Reader r{buf};
  r.need(4, "magic");
  if (std::memcmp(buf.data(), "RIDS", 4) != 0)
    throw ModelIoError("bad magic, not a model file");
  r.pos = 4;
  const uint16_t version = r.u16("version");
  if (version != kModelFormatVersion)
    throw ModelIoError("unsupported model format version " +
                       std::to_string(version));
  const uint8_t kind = r.u8("kind");
  AnyModel result;
  if (kind == kModelKindTree) {
    result = model_detail::read_tree(r);
  } else if (kind == kModelKindForest) {
    ForestModel f;
    f.features_per_split = r.u16("forest.features_per_split");
    f.bootstrap = r.u8("forest.bootstrap");
    f.seed = r.u64("forest.seed");
    const uint32_t n = r.u32("forest.n_trees");
    if (n == 0) throw ModelIoError("forest with zero trees");
    f.trees.reserve(n);
    for (uint32_t i = 0; i < n; ++i)
      f.trees.push_back(model_detail::read_tree(r));
    result = std::move(f);
  } else if (kind == kModelKindLogReg) {
    LogRegModel m;
    m.n_classes = r.u16("logreg.n_classes");
    m.n_features = r.u16("logreg.n_features");
    if (m.n_classes == 0 || m.n_features == 0 ||
        m.n_features != kFeatureCount)
      throw ModelIoError("logreg dimensions out of range");
    m.meta = model_detail::read_meta(r);
    m.weights.resize(m.n_classes * m.n_features);
    for (auto& v : m.weights) v = r.f64("logreg.weights");
    m.bias.resize(m.n_classes);
    for (auto& v : m.bias) v = r.f64("logreg.bias");
    m.mean.resize(m.n_features);
    for (auto& v : m.mean) v = r.f64("logreg.mean");
    m.stddev.resize(m.n_features);
    for (auto& v : m.stddev) v = r.f64("logreg.stddev");
    result = std::move(m);
  } else {
    throw ModelIoError("unknown model kind " + std::to_string(kind));
  }
  if (r.pos != buf.size())
    throw ModelIoError("trailing bytes after model payload");
  return result;
}

inline AttackLabel predict_any(const AnyModel& m, const FeatureVector& v) {
  return std::visit([&](const auto& model) { return model.predict(v); }, m);
}

inline const char* model_kind_name(const AnyModel& m) {
  if (std::holds_alternative<TreeModel>(m)) return "tree";
  if (std::holds_alternative<ForestModel>(m)) return "forest";
  return "logreg";
}

inline void save_model_file(const std::string& path, const AnyModel& m) {
  auto bytes = serialize_model(m);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelIoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ModelIoError("short write to " + path);
}

inline AnyModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelIoError("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace rids
