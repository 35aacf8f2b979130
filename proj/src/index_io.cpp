// Copyright 2026 The GANN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gann/index_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "gann/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "index codec assumes a little-endian host");

namespace gann {

namespace {

constexpr char kMagic[4] = {'G', 'A', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  Writer(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open " + path + " for writing");
  }
  void bytes(const void* p, std::size_t len) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(len));
  }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u16(std::uint16_t v) { bytes(&v, 2); }
  void u32(std::uint32_t v) { bytes(&v, 4); }
  void u64(std::uint64_t v) { bytes(&v, 8); }
  void f32(float v) { bytes(&v, 4); }
  void str(const std::string& s) {
    u16(static_cast<std::uint16_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void check(const std::string& path) {
    if (!out_) throw IoError("short write to " + path);
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open " + path);
  }
  void bytes(void* p, std::size_t len) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(len));
    if (static_cast<std::size_t>(in_.gcount()) != len) {
      throw FormatError(path_ + ": truncated at byte offset " +
                        std::to_string(offset_));
    }
    offset_ += len;
  }
  std::uint8_t u8() { std::uint8_t v; bytes(&v, 1); return v; }
  std::uint16_t u16() { std::uint16_t v; bytes(&v, 2); return v; }
  std::uint32_t u32() { std::uint32_t v; bytes(&v, 4); return v; }
  std::uint64_t u64() { std::uint64_t v; bytes(&v, 8); return v; }
  float f32() { float v; bytes(&v, 4); return v; }
  std::string str() {
    const std::uint16_t len = u16();
    std::string s(len, '\0');
    if (len > 0) bytes(s.data(), len);
    return s;
  }
  void expect_eof() {
    char c;
    in_.read(&c, 1);
    if (!in_.eof()) {
      throw FormatError(path_ + ": trailing bytes at offset " +
                        std::to_string(offset_));
    }
  }
  std::uint64_t offset() const { return offset_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::uint64_t offset_ = 0;
};

void write_flat_payload(Writer& w, const FlatGraph& g) {
  for (const auto& list : g.adjacency) {
    w.u32(static_cast<std::uint32_t>(list.size()));
    if (!list.empty()) w.bytes(list.data(), list.size() * sizeof(NodeId));
  }
}

FlatGraph read_flat_payload(Reader& r, std::size_t n, std::size_t d,
                            std::uint32_t cap_R) {
  FlatGraph g(n, cap_R);
  g.d = d;
  for (std::size_t u = 0; u < n; ++u) {
    const std::uint32_t deg = r.u32();
    if (deg > cap_R) {
      throw FormatError("degree " + std::to_string(deg) +
                        " exceeds cap at byte offset " + std::to_string(r.offset()));
    }
    g.adjacency[u].resize(deg);
    if (deg > 0) r.bytes(g.adjacency[u].data(), deg * sizeof(NodeId));
  }
  return g;
}

void write_seed_section(Writer& w, const SeedIndex& seeds) {
  w.u8(static_cast<std::uint8_t>(seeds.kind));
  switch (seeds.kind) {
    case SsKind::kNone:
    case SsKind::kSN:
      break;
    case SsKind::kKD: {
      const auto& forest = std::get<KdForest>(seeds.payload);
      w.u32(static_cast<std::uint32_t>(forest.trees.size()));
      for (const KdTree& tree : forest.trees) {
        w.u32(static_cast<std::uint32_t>(tree.nodes.size()));
        for (const auto& node : tree.nodes) {
          w.u8(node.is_leaf ? 1 : 0);
          if (node.is_leaf) {
            w.u32(static_cast<std::uint32_t>(node.members.size()));
            if (!node.members.empty()) {
              w.bytes(node.members.data(), node.members.size() * sizeof(NodeId));
            }
          } else {
            w.u32(node.split_dim);
            w.f32(node.split_val);
            w.u32(node.left);
            w.u32(node.right);
          }
        }
      }
      break;
    }
    case SsKind::kKM: {
      const auto& tree = std::get<KmTree>(seeds.payload);
      w.u32(static_cast<std::uint32_t>(tree.nodes.size()));
      for (const auto& node : tree.nodes) {
        w.u8(node.is_leaf ? 1 : 0);
        if (node.is_leaf) {
          w.u32(static_cast<std::uint32_t>(node.members.size()));
          if (!node.members.empty()) {
            w.bytes(node.members.data(), node.members.size() * sizeof(NodeId));
          }
        } else {
          w.u32(static_cast<std::uint32_t>(node.children.size()));
          for (std::size_t c = 0; c < node.children.size(); ++c) {
            w.u32(node.children[c]);
            w.bytes(node.centroids[c].data(), node.centroids[c].size() * sizeof(float));
          }
        }
      }
      break;
    }
    case SsKind::kMD:
    case SsKind::kSF:
      w.u32(std::get<NodeId>(seeds.payload));
      break;
    case SsKind::kKS:
      w.u64(std::get<KsSeed>(seeds.payload).seed);
      break;
  }
}

SeedIndex read_seed_section(Reader& r, std::size_t n, std::size_t d) {
  SeedIndex seeds;
  const std::uint8_t kind = r.u8();
  if (kind > 6) {
    throw FormatError("seed kind byte out of range at offset " +
                      std::to_string(r.offset()));
  }
  seeds.kind = static_cast<SsKind>(kind);
  switch (seeds.kind) {
    case SsKind::kNone:
    case SsKind::kSN:
      break;
    case SsKind::kKD: {
      KdForest forest;
      forest.trees.resize(r.u32());
      for (KdTree& tree : forest.trees) {
        tree.nodes.resize(r.u32());
        for (auto& node : tree.nodes) {
          node.is_leaf = r.u8() != 0;
          if (node.is_leaf) {
            node.members.resize(r.u32());
            if (!node.members.empty()) {
              r.bytes(node.members.data(), node.members.size() * sizeof(NodeId));
            }
          } else {
            node.split_dim = r.u32();
            node.split_val = r.f32();
            node.left = r.u32();
            node.right = r.u32();
          }
        }
      }
      seeds.payload = std::move(forest);
      break;
    }
    case SsKind::kKM: {
      KmTree tree;
      tree.nodes.resize(r.u32());
      for (auto& node : tree.nodes) {
        node.is_leaf = r.u8() != 0;
        if (node.is_leaf) {
          node.members.resize(r.u32());
          if (!node.members.empty()) {
            r.bytes(node.members.data(), node.members.size() * sizeof(NodeId));
          }
        } else {
          const std::uint32_t children = r.u32();
          node.children.resize(children);
          node.centroids.assign(children, std::vector<float>(d));
          for (std::uint32_t c = 0; c < children; ++c) {
            node.children[c] = r.u32();
            r.bytes(node.centroids[c].data(), d * sizeof(float));
          }
        }
      }
      seeds.payload = std::move(tree);
      break;
    }
    case SsKind::kMD:
    case SsKind::kSF: {
      const std::uint32_t id = r.u32();
      if (id >= n) {
        throw FormatError("seed node out of range at offset " +
                          std::to_string(r.offset()));
      }
      seeds.payload = static_cast<NodeId>(id);
      break;
    }
    case SsKind::kKS:
      seeds.payload = KsSeed{n, r.u64()};
      break;
  }
  return seeds;
}

}  // namespace

void save_index(const IndexFile& file, const std::string& path) {
  Writer w(path);
  w.bytes(kMagic, 4);
  w.u32(kVersion);

  if (const auto* flat = std::get_if<FlatGraph>(&file.index)) {
    w.u8(0);
    w.u64(flat->n);
    w.u32(static_cast<std::uint32_t>(flat->d));
    w.u32(flat->cap_R);
    write_flat_payload(w, *flat);
  } else if (const auto* layered = std::get_if<LayeredGraph>(&file.index)) {
    w.u8(1);
    w.u64(layered->n());
    w.u32(static_cast<std::uint32_t>(layered->layers[0].d));
    w.u32(layered->layers[0].cap_R);
    w.u32(static_cast<std::uint32_t>(layered->layers.size()));
    for (std::size_t l = 0; l < layered->layers.size(); ++l) {
      write_flat_payload(w, layered->layers[l]);
      const auto members = layered->layer_members(l);
      w.u32(static_cast<std::uint32_t>(members.size()));
      if (!members.empty()) {
        w.bytes(members.data(), members.size() * sizeof(NodeId));
      }
    }
    w.u32(layered->entry);
  } else {
    const auto& part = std::get<PartitionedIndex>(file.index);
    w.u8(2);
    w.u64(part.n);
    w.u32(static_cast<std::uint32_t>(part.d));
    w.u32(part.cap_R);
    w.u8(static_cast<std::uint8_t>(part.mode));
    w.u32(static_cast<std::uint32_t>(part.partitions.size()));
    for (const Partition& p : part.partitions) {
      w.u32(static_cast<std::uint32_t>(p.members.size()));
      if (!p.members.empty()) {
        w.bytes(p.members.data(), p.members.size() * sizeof(NodeId));
      }
      w.bytes(p.centroid.data(), p.centroid.size() * sizeof(float));
      write_flat_payload(w, p.graph);
    }
  }

  write_seed_section(w, file.seeds);

  w.u8(1);  // metadata present
  w.str(file.meta.method);
  w.str(file.meta.nd);
  w.str(file.meta.ss);
  w.f32(file.meta.alpha);
  w.f32(file.meta.theta_deg);
  w.u32(file.meta.M);
  w.u32(file.meta.beam_L_build);
  w.u64(file.meta.build_seed);
  w.check(path);
}

IndexFile load_index(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(path + ": bad magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw FormatError(path + ": unsupported version " + std::to_string(version));
  }
  const std::uint8_t kind = r.u8();
  if (kind > 2) {
    throw FormatError(path + ": kind byte out of range (" + std::to_string(kind) + ")");
  }
  const std::uint64_t n = r.u64();
  const std::uint32_t d = r.u32();
  const std::uint32_t cap_R = r.u32();

  IndexFile file;
  if (kind == 0) {
    FlatGraph g = read_flat_payload(r, n, d, cap_R);
    g.validate("load_index");
    file.index = std::move(g);
  } else if (kind == 1) {
    LayeredGraph lg;
    const std::uint32_t layer_count = r.u32();
    if (layer_count == 0) {
      throw FormatError(path + ": layered index with no layers");
    }
    lg.membership.assign(n, 0);
    lg.layers.reserve(layer_count);
    std::vector<bool> in_prev(n, true);
    for (std::uint32_t l = 0; l < layer_count; ++l) {
      lg.layers.push_back(read_flat_payload(r, n, d, cap_R));
      const std::uint32_t member_count = r.u32();
      std::vector<NodeId> members(member_count);
      if (member_count > 0) {
        r.bytes(members.data(), member_count * sizeof(NodeId));
      }
      std::vector<bool> in_this(n, false);
      for (NodeId m : members) {
        if (m >= n) {
          throw FormatError(path + ": layer member out of range at offset " +
                            std::to_string(r.offset()));
        }
        if (!in_prev[m]) {
          throw FormatError(path + ": layer nesting violated at offset " +
                            std::to_string(r.offset()));
        }
        in_this[m] = true;
        lg.membership[m] = l;
      }
      if (l == 0 && member_count != n) {
        throw FormatError(path + ": base layer must contain all nodes");
      }
      in_prev = std::move(in_this);
    }
    lg.entry = r.u32();
    lg.validate();
    file.index = std::move(lg);
  } else {
    PartitionedIndex part;
    part.n = n;
    part.d = d;
    part.cap_R = cap_R;
    const std::uint8_t mode = r.u8();
    if (mode > 1) {
      throw FormatError(path + ": partition mode byte out of range");
    }
    part.mode = static_cast<DcMode>(mode);
    part.partitions.resize(r.u32());
    for (Partition& p : part.partitions) {
      const std::uint32_t member_count = r.u32();
      p.members.resize(member_count);
      if (member_count > 0) {
        r.bytes(p.members.data(), member_count * sizeof(NodeId));
      }
      p.centroid.resize(d);
      r.bytes(p.centroid.data(), d * sizeof(float));
      p.graph = read_flat_payload(r, member_count, d, cap_R);
    }
    part.validate();
    file.index = std::move(part);
  }

  file.seeds = read_seed_section(r, n, d);

  if (r.u8() == 1) {
    file.meta.method = r.str();
    file.meta.nd = r.str();
    file.meta.ss = r.str();
    file.meta.alpha = r.f32();
    file.meta.theta_deg = r.f32();
    file.meta.M = r.u32();
    file.meta.beam_L_build = r.u32();
    file.meta.build_seed = r.u64();
  }
  r.expect_eof();
  return file;
}

}  // namespace gann
