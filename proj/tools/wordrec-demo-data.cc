// tools/wordrec-demo-data.cc

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

// Generates a tiny tone-coded corpus for exercising the CLI end to end:
// WAV files, manifests, reference transcripts, and an LM text corpus.
// Each word is a pure tone, so a small model learns the task in minutes.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wordrec/common/error.h"
#include "wordrec/features/wav.h"

namespace wordrec {
namespace {

const std::vector<std::string> kWords = {"alpha", "bravo", "charlie", "delta",
                                         "echo"};
const std::vector<double> kToneHz = {300.0, 500.0, 750.0, 1050.0, 1400.0};

AudioClip RenderUtterance(const std::vector<int>& words, std::mt19937_64& rng) {
  constexpr int kRate = 16000;
  constexpr int kToneSamples = kRate / 5;     // 200 ms per word
  constexpr int kGapSamples = kRate * 2 / 25;  // 80 ms of silence
  std::normal_distribution<double> noise(0.0, 0.04);
  AudioClip clip;
  clip.sample_rate = kRate;
  clip.samples.assign(kGapSamples, 0.0);
  for (int word : words) {
    for (int i = 0; i < kToneSamples; ++i) {
      double envelope = std::sin(M_PI * i / kToneSamples);
      clip.samples.push_back(
          0.4 * envelope *
          std::sin(2.0 * M_PI * kToneHz[word] * i / kRate));
    }
    for (int i = 0; i < kGapSamples; ++i) clip.samples.push_back(0.0);
  }
  for (double& s : clip.samples) s += noise(rng);
  return clip;
}

int Main(int argc, char** argv) {
  CLI::App app{"generate a tone-coded demo corpus for the wordrec CLI"};
  std::string out_dir = "demo-data";
  int train_count = 150, test_count = 30;
  std::uint64_t seed = 1;
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--train", train_count, "training utterances");
  app.add_option("--test", test_count, "test utterances");
  app.add_option("--seed", seed, "generation seed");
  CLI11_PARSE(app, argc, argv);

  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "wav");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> length(2, 5);
  std::uniform_int_distribution<int> word(0, static_cast<int>(kWords.size()) - 1);

  std::ofstream corpus(fs::path(out_dir) / "corpus.txt");
  std::ofstream refs(fs::path(out_dir) / "test-refs.jsonl");
  for (const auto& [split, count] :
       {std::pair<std::string, int>{"train", train_count},
        std::pair<std::string, int>{"test", test_count}}) {
    std::ofstream manifest(fs::path(out_dir) / (split + "-audio.jsonl"));
    for (int i = 0; i < count; ++i) {
      std::string id = split + std::to_string(i);
      std::vector<int> words;
      int n = length(rng);
      for (int j = 0; j < n; ++j) words.push_back(word(rng));
      std::string wav_path = (fs::path(out_dir) / "wav" / (id + ".wav")).string();
      WriteWav(RenderUtterance(words, rng), wav_path);

      std::vector<std::string> transcript;
      for (int w : words) transcript.push_back(kWords[w]);
      nlohmann::ordered_json j;
      j["utterance_id"] = id;
      j["audio_path"] = wav_path;
      j["transcript"] = transcript;
      manifest << j.dump() << '\n';
      if (split == "train") {
        for (std::size_t k = 0; k < transcript.size(); ++k) {
          corpus << (k ? " " : "") << transcript[k];
        }
        corpus << '\n';
      } else {
        nlohmann::ordered_json r;
        r["id"] = id;
        r["words"] = transcript;
        refs << r.dump() << '\n';
      }
    }
  }
  std::cout << "wrote " << train_count << " train / " << test_count
            << " test utterances under " << out_dir << std::endl;
  return 0;
}

}  // namespace
}  // namespace wordrec

int main(int argc, char** argv) {
  try {
    return wordrec::Main(argc, argv);
  } catch (const wordrec::Error& e) {
    std::cerr << e.what() << std::endl;
    return 1;
  }
}
