// wordrec/datafilter/islands.h

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

#ifndef WORDREC_DATAFILTER_ISLANDS_H_
#define WORDREC_DATAFILTER_ISLANDS_H_

#include <string>
#include <vector>

#include "wordrec/language/ngram.h"

namespace wordrec {

struct TimedWord {
  std::string word;
  double t0 = 0.0;
  double t1 = 0.0;
};

// A caption to compare against a recognizer hypothesis with word timings.
struct CaptionedUtterance {
  std::string id;
  std::vector<std::string> caption;
  std::vector<TimedWord> hypothesis;
};

// A maximal run of >= min_island consecutive caption/hypothesis matches.
struct Island {
  int begin = 0;  // first hypothesis word index
  int end = 0;    // one past the last hypothesis word index
  double t0 = 0.0;
  double t1 = 0.0;
  std::vector<std::string> words;
};

// Levenshtein-aligns caption and hypothesis (unit costs, lowercased exact
// token match) and returns the maximal match runs of length >= min_island,
// carrying the hypothesis time spans. min_island < 1 is a ConfigError.
std::vector<Island> FindIslands(const CaptionedUtterance& u, int min_island);

// Background LM nudged toward the caption: linear interpolation
// (1-weight)*background + weight*LM(caption). An empty caption returns the
// background unchanged. Weight outside [0,1] is a ConfigError.
NGramLm CaptionBiasedLm(const NGramLm& background,
                        const std::vector<std::string>& caption, double weight,
                        const Vocabulary& vocab);

struct RetentionStats {
  double retained_fraction = 0.0;
  std::int64_t segment_count = 0;
  double total_duration = 0.0;
  double retained_duration = 0.0;
};

// Retained duration = island time; total duration = hypothesis span per
// utterance, summed.
RetentionStats ComputeRetention(
    const std::vector<std::vector<Island>>& islands,
    const std::vector<CaptionedUtterance>& utterances);

// JSONL {id, caption, hyp_words:[{w,t0,t1}]} per line.
std::vector<CaptionedUtterance> ReadCaptionedJsonl(const std::string& path);
// JSONL {id, islands:[{i0,i1,t0,t1,words}]} per line.
void WriteIslandsJsonl(const std::vector<CaptionedUtterance>& utterances,
                       const std::vector<std::vector<Island>>& islands,
                       const std::string& path);
void WriteRetentionCsv(const RetentionStats& stats, const std::string& path);

}  // namespace wordrec

#endif  // WORDREC_DATAFILTER_ISLANDS_H_
