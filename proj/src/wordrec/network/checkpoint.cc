// wordrec/network/checkpoint.cc

// Copyright 2026 The Wordrec Authors.
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

#include "wordrec/network/checkpoint.h"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wordrec/common/binary-io.h"
#include "wordrec/common/error.h"

namespace wordrec {

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("IoError", "cannot write " + path);
  WriteMagic(os, "NSRC");
  WriteScalar<std::uint32_t>(os, kCheckpointVersion);
  WriteScalar<std::uint32_t>(os, ckpt.stack.depths());
  WriteScalar<std::uint32_t>(os, ckpt.stack.hidden());
  WriteScalar<std::uint32_t>(os, ckpt.stack.input_dim());
  WriteScalar<std::uint32_t>(os, ckpt.stack.num_outputs());
  for (int i = 0; i < ckpt.stack.NumTensors(); ++i) {
    const Eigen::MatrixXd& t = ckpt.stack.Tensor(i);
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) {
        WriteScalar<double>(os, t(r, c));
      }
    }
  }
  if (!os) throw Error("IoError", "write failed: " + path);
  os.close();

  nlohmann::ordered_json manifest;
  manifest["format_version"] = kCheckpointVersion;
  manifest["depths"] = ckpt.stack.depths();
  manifest["hidden"] = ckpt.stack.hidden();
  manifest["input_dim"] = ckpt.stack.input_dim();
  manifest["num_outputs"] = ckpt.stack.num_outputs();
  manifest["step"] = ckpt.step;
  manifest["learning_rate"] = ckpt.learning_rate;
  manifest["vocab_checksum"] = ckpt.vocab_checksum;
  std::ofstream ms(path + ".json", std::ios::binary);
  if (!ms) throw Error("IoError", "cannot write " + path + ".json");
  ms << manifest.dump(2) << '\n';
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  ExpectMagic(is, "NSRC", path);
  auto version = ReadScalar<std::uint32_t>(is, "version");
  if (version != kCheckpointVersion) {
    throw Error("FormatError",
                "unsupported checkpoint version " + std::to_string(version));
  }
  auto depths = ReadScalar<std::uint32_t>(is, "depths");
  auto hidden = ReadScalar<std::uint32_t>(is, "hidden");
  auto input_dim = ReadScalar<std::uint32_t>(is, "input_dim");
  auto num_outputs = ReadScalar<std::uint32_t>(is, "num_outputs");

  Checkpoint ckpt;
  ckpt.stack = BlstmStack(depths, hidden, input_dim, num_outputs);
  for (int i = 0; i < ckpt.stack.NumTensors(); ++i) {
    Eigen::MatrixXd& t = ckpt.stack.Tensor(i);
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) {
        t(r, c) = ReadScalar<double>(is, "parameter");
      }
    }
  }

  std::ifstream ms(path + ".json", std::ios::binary);
  if (ms) {
    nlohmann::json manifest = nlohmann::json::parse(ms, nullptr, false);
    if (!manifest.is_discarded()) {
      ckpt.step = manifest.value("step", std::uint64_t{0});
      ckpt.learning_rate = manifest.value("learning_rate", 0.0);
      ckpt.vocab_checksum = manifest.value("vocab_checksum", std::string());
    }
  }
  return ckpt;
}

std::string ChecksumLines(const std::vector<std::string>& lines) {
  std::uint64_t hash = 1469598103934665603ull;  // FNV offset basis
  auto mix = [&hash](char c) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;  // FNV prime
  };
  for (const std::string& line : lines) {
    for (char c : line) mix(c);
    mix('\n');
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << hash;
  return os.str();
}

}  // namespace wordrec
