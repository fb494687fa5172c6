// Copyright 2026 The Coherence Fusion Authors.
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

#include "coh/checkpoint.h"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "coh/errors.h"

namespace coh {
namespace {

constexpr char kMagic[8] = {'C', 'O', 'H', 'F', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::ostream &out, T v) {
  unsigned char b[sizeof(T)];
  for (size_t k = 0; k < sizeof(T); ++k) {
    b[k] = static_cast<unsigned char>((v >> (8 * k)) & 0xff);
  }
  out.write(reinterpret_cast<const char *>(b), sizeof(T));
}

template <typename T>
T get(std::istream &in) {
  unsigned char b[sizeof(T)];
  if (!in.read(reinterpret_cast<char *>(b), sizeof(T))) {
    throw ParseError("truncated checkpoint", 0);
  }
  T v = 0;
  for (size_t k = 0; k < sizeof(T); ++k) v |= static_cast<T>(b[k]) << (8 * k);
  return v;
}

void put_double(std::ostream &out, double d) {
  uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  put<uint64_t>(out, bits);
}

double get_double(std::istream &in) {
  uint64_t bits = get<uint64_t>(in);
  double d;
  std::memcpy(&d, &bits, sizeof d);
  return d;
}

std::string get_string(std::istream &in, uint64_t len) {
  if (len > (uint64_t{1} << 30)) throw ParseError("corrupt checkpoint", 0);
  std::string s(len, '\0');
  if (!in.read(s.data(), static_cast<std::streamsize>(len))) {
    throw ParseError("truncated checkpoint", 0);
  }
  return s;
}

}  // namespace

void save_checkpoint(std::ostream &out, const FusionModel &model) {
  out.write(kMagic, sizeof kMagic);
  put<uint32_t>(out, kCheckpointVersion);
  const std::string config = model.config().to_json().dump();
  put<uint64_t>(out, config.size());
  out.write(config.data(), static_cast<std::streamsize>(config.size()));
  const auto &params = model.parameters();
  put<uint32_t>(out, static_cast<uint32_t>(params.size()));
  for (const auto &p : params) {
    put<uint32_t>(out, static_cast<uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    put<uint32_t>(out, static_cast<uint32_t>(p.value.rows()));
    put<uint32_t>(out, static_cast<uint32_t>(p.value.cols()));
    for (Eigen::Index k = 0; k < p.value.size(); ++k) {
      put_double(out, p.value.data()[k]);
    }
  }
}

void save_checkpoint_file(const std::string &path, const FusionModel &model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint '" + path + "'");
  save_checkpoint(out, model);
  if (!out) throw Error("write failed for '" + path + "'");
}

FusionModel load_checkpoint(std::istream &in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) ||
      std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ParseError("not a checkpoint file", 0);
  }
  const uint32_t version = get<uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw ParseError("unsupported checkpoint version " +
                         std::to_string(version),
                     0);
  }
  const std::string config_text = get_string(in, get<uint64_t>(in));
  ModelConfig config;
  try {
    config = ModelConfig::from_json(Json::parse(config_text));
  } catch (const Json::exception &e) {
    throw ParseError(std::string("bad checkpoint config: ") + e.what(), 0);
  }
  FusionModel model(config);
  auto &params = model.parameters();
  const uint32_t n = get<uint32_t>(in);
  if (n != params.size()) {
    throw ParseError("checkpoint has " + std::to_string(n) +
                         " tensors but its config implies " +
                         std::to_string(params.size()),
                     0);
  }
  for (auto &p : params) {
    const std::string name = get_string(in, get<uint32_t>(in));
    const uint32_t rows = get<uint32_t>(in);
    const uint32_t cols = get<uint32_t>(in);
    if (name != p.name || rows != p.value.rows() || cols != p.value.cols()) {
      throw ParseError("checkpoint tensor " + name + " [" +
                           std::to_string(rows) + "x" + std::to_string(cols) +
                           "] does not match expected " + p.name + " [" +
                           std::to_string(p.value.rows()) + "x" +
                           std::to_string(p.value.cols()) + "]",
                       0);
    }
    for (Eigen::Index k = 0; k < p.value.size(); ++k) {
      p.value.data()[k] = get_double(in);
    }
  }
  return model;
}

FusionModel load_checkpoint_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint '" + path + "'");
  return load_checkpoint(in);
}

std::vector<std::string> config_diff(const ModelConfig &a,
                                     const ModelConfig &b) {
  std::vector<std::string> out;
  const Json ja = a.to_json(), jb = b.to_json();
  for (auto it = ja.begin(); it != ja.end(); ++it) {
    const Json &other = jb.at(it.key());
    if (*it != other) {
      out.push_back(it.key() + ": " + it->dump() + " vs " + other.dump());
    }
  }
  return out;
}

}  // namespace coh
