// tools/wordrec-cli.cc

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

// Command-line surface: featurize, build-vocab, build-verbalizer, train-lm,
// train, recognize, rescore, filter-captions, score. A JSON config file may
// supply any long flag (by name, without dashes); command-line values win.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wordrec/common/error.h"
#include "wordrec/ctc/ctc.h"
#include "wordrec/datafilter/islands.h"
#include "wordrec/eval/wer.h"
#include "wordrec/features/feature.h"
#include "wordrec/features/wav.h"
#include "wordrec/language/ngram.h"
#include "wordrec/language/verbalizer.h"
#include "wordrec/language/vocab.h"
#include "wordrec/lattice/sausage.h"
#include "wordrec/network/checkpoint.h"
#include "wordrec/network/pipeline.h"
#include "wordrec/trainer/trainer.h"
#include "wordrec/wfst/wfst.h"

namespace wordrec {
namespace {

constexpr const char* kToolVersion = "1.0.0";

struct ManifestRow {
  std::string utterance_id;
  std::string audio_path;
  std::string feature_path;
  std::vector<std::string> transcript;
  bool has_transcript = false;
};

std::vector<std::string> SplitWords(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::string> words;
  std::string w;
  while (is >> w) words.push_back(w);
  return words;
}

std::vector<ManifestRow> ReadManifest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  std::vector<ManifestRow> rows;
  std::map<std::string, bool> seen;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error("FormatError", "bad JSONL: " + line);
    ManifestRow row;
    row.utterance_id = j.at("utterance_id").get<std::string>();
    if (seen[row.utterance_id]) {
      throw Error("FormatError",
                  "duplicate utterance id '" + row.utterance_id + "'");
    }
    seen[row.utterance_id] = true;
    row.audio_path = j.value("audio_path", std::string());
    row.feature_path = j.value("feature_path", std::string());
    if (j.contains("transcript")) {
      row.has_transcript = true;
      if (j["transcript"].is_string()) {
        row.transcript = SplitWords(j["transcript"].get<std::string>());
      } else {
        row.transcript = j["transcript"].get<std::vector<std::string>>();
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Flat JSON object supplying defaults for long flags; values given on the
// command line win.
class ConfigDefaults {
 public:
  explicit ConfigDefaults(const std::string& path) {
    if (path.empty()) return;
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("IoError", "cannot read config " + path);
    nlohmann::json j = nlohmann::json::parse(is, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error("FormatError", "config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
      values_[key] = value.is_string() ? value.get<std::string>()
                                       : value.dump();
    }
  }

  void Apply(CLI::App* cmd) const {
    for (const auto& [key, value] : values_) {
      CLI::Option* opt = cmd->get_option_no_throw("--" + key);
      if (opt != nullptr && opt->empty()) {
        opt->default_val(value);
      }
    }
  }

 private:
  std::map<std::string, std::string> values_;
};

FeatureSequence LoadUtteranceFeatures(const ManifestRow& row) {
  if (row.feature_path.empty()) {
    throw Error("ConfigError",
                "utterance '" + row.utterance_id + "' has no feature_path");
  }
  return ReadFeatureFile(row.feature_path);
}

void RequireChecksumMatch(const Checkpoint& ckpt, const Vocabulary& vocab) {
  if (!ckpt.vocab_checksum.empty() && ckpt.vocab_checksum != vocab.Checksum()) {
    throw Error("ConfigError",
                "checkpoint was trained against a different vocabulary (" +
                    ckpt.vocab_checksum + " vs " + vocab.Checksum() + ")");
  }
}

// ---------------------------------------------------------------------------

int RunFeaturize(const std::string& manifest_path, const std::string& out_dir,
                 const std::string& out_manifest, const FeatureConfig& cfg) {
  std::vector<ManifestRow> rows = ReadManifest(manifest_path);
  std::ofstream out(out_manifest, std::ios::binary);
  if (!out) throw Error("IoError", "cannot write " + out_manifest);
  for (const auto& row : rows) {
    if (row.audio_path.empty()) {
      throw Error("ConfigError",
                  "utterance '" + row.utterance_id + "' has no audio_path");
    }
    AudioClip clip = ReadWav(row.audio_path);
    FeatureSequence features = ExtractFilterbank(clip, cfg);
    std::string feature_path = out_dir + "/" + row.utterance_id + ".feat";
    WriteFeatureFile(features, feature_path);
    nlohmann::ordered_json j;
    j["utterance_id"] = row.utterance_id;
    j["feature_path"] = feature_path;
    if (row.has_transcript) {
      j["transcript"] = row.transcript;
    }
    out << j.dump() << '\n';
  }
  return 0;
}

int RunBuildVocab(const std::string& corpus_path, std::int64_t min_count,
                  const std::string& domain, const std::string& out_path) {
  VocabDomain vocab_domain =
      domain == "spoken" ? VocabDomain::kSpoken : VocabDomain::kWritten;
  Vocabulary vocab =
      BuildVocab(ReadTokenizedLines(corpus_path), min_count, vocab_domain);
  vocab.Save(out_path);
  std::cout << "vocabulary: " << vocab.size() << " words, checksum "
            << vocab.Checksum() << std::endl;
  return 0;
}

int RunBuildVerbalizer(const std::string& rules_path,
                       const std::string& written_path,
                       const std::string& spoken_path,
                       const std::string& out_path,
                       const std::string& symbols_prefix) {
  Vocabulary written = Vocabulary::Load(written_path, VocabDomain::kWritten);
  Vocabulary spoken = Vocabulary::Load(spoken_path, VocabDomain::kSpoken);
  Wfst v = BuildVerbalizer(LoadVerbalizerRules(rules_path), written, spoken);
  WriteFstFile(v, out_path);
  if (!symbols_prefix.empty()) {
    written.ToSymbolTable().Save(symbols_prefix + ".isyms.tsv");
    spoken.ToSymbolTable().Save(symbols_prefix + ".osyms.tsv");
  }
  std::cout << "verbalizer: " << v.NumStates() << " states, " << v.NumArcs()
            << " arcs" << std::endl;
  return 0;
}

int RunTrainLm(const std::string& corpus_path, int order,
               const std::string& vocab_path, const std::string& out_path) {
  Vocabulary vocab = Vocabulary::Load(vocab_path);
  NGramLm lm = TrainNgram(ReadTokenizedLines(corpus_path), order, vocab);
  lm.WriteArpa(vocab, out_path);
  std::cout << "lm: order " << lm.order() << ", " << lm.logprob().size()
            << " n-grams" << std::endl;
  return 0;
}

int RunTrain(const std::string& manifest_path, const std::string& vocab_path,
             int depths, int hidden, const std::string& loss,
             const std::string& align_checkpoint, const std::string& warm_start,
             TrainConfig cfg, const std::string& checkpoint_path) {
  Vocabulary vocab = Vocabulary::Load(vocab_path);
  cfg.vocab_checksum = vocab.Checksum();
  cfg.loss = loss == "ce" ? LossKind::kCrossEntropy : LossKind::kCtc;

  std::vector<TrainExample> dataset;
  std::int64_t oov_skipped = 0;
  int input_dim = -1;
  for (const auto& row : ReadManifest(manifest_path)) {
    if (!row.has_transcript) {
      throw Error("ConfigError",
                  "utterance '" + row.utterance_id + "' has no transcript");
    }
    TrainExample ex;
    ex.id = row.utterance_id;
    ex.features = LoadUtteranceFeatures(row);
    bool oov = false;
    for (const auto& word : row.transcript) {
      int id = vocab.Find(word);
      if (id < 0) {
        oov = true;
        break;
      }
      ex.labels.push_back(id);
    }
    if (oov) {
      ++oov_skipped;
      continue;
    }
    if (input_dim < 0) input_dim = ex.features.dim();
    dataset.push_back(std::move(ex));
  }
  if (dataset.empty()) throw Error("EmptyCorpus", "no trainable utterances");
  if (oov_skipped > 0) {
    std::cerr << "warning: skipped " << oov_skipped
              << " utterances with out-of-vocabulary transcripts" << std::endl;
  }

  BlstmStack init = InitStack(
      {depths, hidden, input_dim, vocab.size() + 1},
      cfg.seed);
  if (!warm_start.empty()) {
    Checkpoint prior = LoadCheckpoint(warm_start);
    if (prior.stack.depths() != depths || prior.stack.hidden() != hidden ||
        prior.stack.input_dim() != input_dim) {
      throw Error("ConfigError", "warm-start geometry mismatch");
    }
    // Hidden layers come from the prior model; the output layer stays fresh.
    for (int i = 0; i < 6 * depths; ++i) {
      init.Tensor(i) = prior.stack.Tensor(i);
    }
  }

  if (cfg.loss == LossKind::kCrossEntropy) {
    if (align_checkpoint.empty()) {
      throw Error("ConfigError",
                  "--loss ce needs --align-checkpoint for frame targets");
    }
    Checkpoint aligner = LoadCheckpoint(align_checkpoint);
    RequireChecksumMatch(aligner, vocab);
    for (auto& ex : dataset) {
      CtcLattice lattice(ex.labels);
      if (ex.features.num_frames() < lattice.MinFrames()) continue;
      PosteriorGrid grid = Forward(aligner.stack, ex.features);
      ex.frame_targets = ForcedAlign(grid, lattice).frame_labels;
    }
    std::erase_if(dataset, [](const TrainExample& ex) {
      return ex.frame_targets.empty();
    });
    if (dataset.empty()) {
      throw Error("EmptyCorpus", "no alignable utterances for CE targets");
    }
  }

  TrainOutcome outcome = Train(cfg, dataset, init);
  SaveCheckpoint(outcome.checkpoint, checkpoint_path);
  std::cout << "trained " << cfg.max_steps << " steps; skipped "
            << outcome.skipped_utterances << " unalignable utterances; final "
            << "loss "
            << (outcome.metrics.empty() ? 0.0 : outcome.metrics.back().loss)
            << std::endl;
  return 0;
}

int RunRecognize(const std::string& checkpoint_path,
                 const std::string& vocab_path, const std::string& manifest_path,
                 const std::string& out_path, int workers) {
  Checkpoint ckpt = LoadCheckpoint(checkpoint_path);
  Vocabulary vocab = Vocabulary::Load(vocab_path);
  RequireChecksumMatch(ckpt, vocab);
  std::vector<ManifestRow> rows = ReadManifest(manifest_path);
  std::sort(rows.begin(), rows.end(),
            [](const ManifestRow& a, const ManifestRow& b) {
              return a.utterance_id < b.utterance_id;
            });
  std::vector<FeatureSequence> batch;
  batch.reserve(rows.size());
  for (const auto& row : rows) batch.push_back(LoadUtteranceFeatures(row));
  std::vector<PosteriorGrid> grids =
      ForwardPipelined(ckpt.stack, batch, workers);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot write " + out_path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    LabelSequence decoded = BestPathDecode(grids[i]);
    nlohmann::ordered_json j;
    j["utterance_id"] = rows[i].utterance_id;
    std::vector<std::string> words;
    for (int id : decoded) words.push_back(vocab.Word(id));
    j["words"] = words;
    out << j.dump() << '\n';
  }
  return 0;
}

int RunRescore(const std::string& checkpoint_path, const std::string& vocab_path,
               const std::string& mode, const std::string& written_vocab_path,
               const std::string& verbalizer_path, const std::string& lm_path,
               double lm_scale, int top_k, const std::string& manifest_path,
               const std::string& out_path) {
  Checkpoint ckpt = LoadCheckpoint(checkpoint_path);
  Vocabulary vocab = Vocabulary::Load(
      vocab_path,
      mode == "spoken" ? VocabDomain::kSpoken : VocabDomain::kWritten);
  RequireChecksumMatch(ckpt, vocab);

  Vocabulary written =
      mode == "spoken"
          ? Vocabulary::Load(written_vocab_path, VocabDomain::kWritten)
          : vocab;
  NGramLm lm = NGramLm::ReadArpa(written, lm_path);
  Wfst lm_fst = LmToFst(lm);
  std::optional<Wfst> verbalizer;
  if (mode == "spoken") {
    verbalizer = ReadFstFile(verbalizer_path);
  }
  Wfst collapse = BuildCollapseFst(vocab.size());

  std::vector<ManifestRow> rows = ReadManifest(manifest_path);
  std::sort(rows.begin(), rows.end(),
            [](const ManifestRow& a, const ManifestRow& b) {
              return a.utterance_id < b.utterance_id;
            });
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot write " + out_path);
  int fallbacks = 0;
  for (const auto& row : rows) {
    FeatureSequence features = LoadUtteranceFeatures(row);
    PosteriorGrid grid = Forward(ckpt.stack, features);
    Wfst sausage = BuildSausage(grid, top_k, vocab.size());
    RescoreResult res =
        mode == "spoken"
            ? RescoreSpoken(grid, sausage, collapse, *verbalizer, lm_fst,
                            lm_scale)
            : RescoreWritten(grid, sausage, collapse, lm_fst, lm_scale);
    if (res.used_fallback) {
      ++fallbacks;
      std::cerr << "warning: no rescoring path for '" << row.utterance_id
                << "', emitting the greedy decode" << std::endl;
    }
    nlohmann::ordered_json j;
    j["utterance_id"] = row.utterance_id;
    std::vector<std::string> words;
    for (int id : res.words) {
      words.push_back(res.used_fallback ? vocab.Word(id) : written.Word(id));
    }
    j["words"] = words;
    j["acoustic_cost"] = res.acoustic_cost;
    j["lm_cost"] = res.lm_cost;
    out << j.dump() << '\n';
  }
  if (fallbacks > 0) {
    std::cerr << "warning: " << fallbacks << " utterances fell back to greedy"
              << std::endl;
  }
  return 0;
}

int RunFilterCaptions(const std::string& in_path, int min_island,
                      const std::string& out_path,
                      const std::string& stats_path) {
  std::vector<CaptionedUtterance> utterances = ReadCaptionedJsonl(in_path);
  std::vector<std::vector<Island>> islands;
  islands.reserve(utterances.size());
  for (const auto& u : utterances) {
    islands.push_back(FindIslands(u, min_island));
  }
  WriteIslandsJsonl(utterances, islands, out_path);
  RetentionStats stats = ComputeRetention(islands, utterances);
  if (!stats_path.empty()) WriteRetentionCsv(stats, stats_path);
  std::cout << "retained " << stats.retained_fraction << " of "
            << stats.total_duration << "s across " << stats.segment_count
            << " segments" << std::endl;
  return 0;
}

int RunScore(const std::string& refs_path, const std::string& hyps_path,
             const std::string& mode, const std::string& verbalizer_path,
             const std::string& written_vocab_path,
             const std::string& spoken_vocab_path,
             const std::string& report_path, const std::string& dump_path) {
  auto refs = ReadHypsJsonl(refs_path);
  auto hyps = ReadHypsJsonl(hyps_path);
  WerReport report;
  if (mode == "spoken") {
    Vocabulary written =
        Vocabulary::Load(written_vocab_path, VocabDomain::kWritten);
    Vocabulary spoken =
        Vocabulary::Load(spoken_vocab_path, VocabDomain::kSpoken);
    Wfst verbalizer = ReadFstFile(verbalizer_path);
    report = WerAgainstAlternatives(
        SpokenReferences(refs, verbalizer, written, spoken), hyps);
  } else {
    report = Wer(refs, hyps);
  }
  if (!report_path.empty()) WriteReportJson(report, report_path);
  if (!dump_path.empty()) WriteAlignmentText(report, dump_path);
  std::cout << "WER " << report.Wer() * 100.0 << "% (S=" << report.substitutions
            << " I=" << report.insertions << " D=" << report.deletions
            << " N=" << report.ref_length << ")" << std::endl;
  return 0;
}

int Main(int argc, char** argv) {
  // The config file must be known before option defaults are finalized.
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  }
  ConfigDefaults config(config_path);

  CLI::App app{"wordrec: acoustic-to-word CTC speech recognition toolkit"};
  app.require_subcommand(0, 1);
  app.set_version_flag(
      "--version",
      std::string("wordrec ") + kToolVersion +
          " (checkpoint v1 'NSRC', features v1 'FEAT', fst text v1, "
          "ARPA-style LM)");
  std::string config_echo;
  app.add_option("--config", config_echo,
                 "JSON object supplying defaults for any long flag");

  // featurize
  auto* featurize = app.add_subcommand(
      "featurize", "extract log mel filterbank features from WAV audio");
  std::string f_manifest, f_outdir = ".", f_outmanifest;
  FeatureConfig fcfg;
  double f_window_ms = 25.0, f_hop_ms = 10.0;
  featurize->add_option("--manifest", f_manifest,
                        "JSONL {utterance_id, audio_path, transcript?}")
      ->required();
  featurize->add_option("--out-dir", f_outdir, "directory for .feat files");
  featurize->add_option("--out-manifest", f_outmanifest,
                        "output manifest with feature_path rows")
      ->required();
  featurize->add_option("--window-ms", f_window_ms, "analysis window (ms)");
  featurize->add_option("--hop-ms", f_hop_ms, "hop (ms)");
  featurize->add_option("--mel-bins", fcfg.num_mel_bins, "mel filter count");
  featurize->add_option("--fft-size", fcfg.fft_size, "FFT size (power of 2)");
  featurize->add_option("--log-floor", fcfg.log_floor, "energy floor");
  featurize->add_option("--stack", fcfg.stack_factor,
                        "frames concatenated per output frame");

  // build-vocab
  auto* build_vocab = app.add_subcommand(
      "build-vocab",
      "count words and keep those seen at least min-count times");
  std::string v_corpus, v_domain = "written", v_out;
  std::int64_t v_min_count = 1;
  build_vocab->add_option("--corpus", v_corpus, "text file, one sentence/line")
      ->required();
  build_vocab->add_option("--min-count", v_min_count,
                          "keep words with count >= this ('seen more than N "
                          "times' means N+1)");
  build_vocab->add_option("--domain", v_domain, "written|spoken");
  build_vocab->add_option("--out", v_out, "vocabulary tsv")->required();

  // build-verbalizer
  auto* build_verb = app.add_subcommand(
      "build-verbalizer", "compile written->spoken expansion rules to an FST");
  std::string b_rules, b_written, b_spoken, b_out, b_symbols;
  build_verb->add_option("--rules", b_rules, "written<TAB>expansion lines")
      ->required();
  build_verb->add_option("--vocab-written", b_written, "written vocabulary")
      ->required();
  build_verb->add_option("--vocab-spoken", b_spoken, "spoken vocabulary")
      ->required();
  build_verb->add_option("--out", b_out, "FST text file")->required();
  build_verb->add_option("--write-symbols", b_symbols,
                         "also write <prefix>.isyms.tsv/.osyms.tsv");

  // train-lm
  auto* train_lm = app.add_subcommand(
      "train-lm", "estimate a backoff n-gram model and write ARPA text");
  std::string l_corpus, l_vocab, l_out;
  int l_order = 3;
  train_lm->add_option("--corpus", l_corpus, "text file")->required();
  train_lm->add_option("--order", l_order, "n-gram order");
  train_lm->add_option("--vocab", l_vocab, "vocabulary tsv")->required();
  train_lm->add_option("--out", l_out, "ARPA output")->required();

  // train
  auto* train = app.add_subcommand("train", "train a BLSTM CTC/CE word model");
  std::string t_manifest, t_vocab, t_loss = "ctc", t_align, t_warm, t_ckpt;
  TrainConfig tcfg;
  int t_depths = 2, t_hidden = 64;
  train->add_option("--manifest", t_manifest,
                    "JSONL {utterance_id, feature_path, transcript}")
      ->required();
  train->add_option("--vocab", t_vocab, "vocabulary tsv")->required();
  train->add_option("--depths", t_depths, "bidirectional layer count");
  train->add_option("--hidden", t_hidden, "cells per direction");
  train->add_option("--loss", t_loss, "ctc|ce");
  train->add_option("--align-checkpoint", t_align,
                    "CTC checkpoint providing CE frame targets");
  train->add_option("--warm-start", t_warm,
                    "checkpoint providing initial hidden-layer weights");
  train->add_option("--steps", tcfg.max_steps, "update steps");
  train->add_option("--lr", tcfg.learning_rate, "initial learning rate");
  train->add_option("--lr-decay-steps", tcfg.lr_decay_steps,
                    "halve the rate every N steps (0 = constant)");
  train->add_option("--batch", tcfg.batch_size, "utterances per step");
  train->add_option("--workers", tcfg.worker_count,
                    "asynchronous workers (1 = deterministic)");
  train->add_option("--seed", tcfg.seed, "initialization/shuffle seed");
  train->add_option("--metrics", tcfg.metrics_path, "loss curve CSV");
  train->add_option("--checkpoint", t_ckpt, "output checkpoint")->required();

  // recognize
  auto* recognize = app.add_subcommand(
      "recognize", "greedy decoder-free recognition (argmax + collapse)");
  std::string r_ckpt, r_vocab, r_manifest, r_out;
  int r_workers = 1;
  recognize->add_option("--checkpoint", r_ckpt, "model checkpoint")
      ->required();
  recognize->add_option("--vocab", r_vocab, "vocabulary tsv")->required();
  recognize->add_option("--manifest", r_manifest,
                        "JSONL {utterance_id, feature_path}")
      ->required();
  recognize->add_option("--out", r_out, "hypotheses JSONL")->required();
  recognize->add_option("--workers", r_workers, "pipeline worker threads");

  // rescore
  auto* rescore = app.add_subcommand(
      "rescore", "lattice rescoring with the LM (and verbalizer when spoken)");
  std::string s_ckpt, s_vocab, s_mode = "written", s_written, s_verb, s_lm,
              s_manifest, s_out;
  double s_scale = 1.0;
  int s_topk = 10;
  rescore->add_option("--checkpoint", s_ckpt, "model checkpoint")->required();
  rescore->add_option("--vocab", s_vocab, "model vocabulary")->required();
  rescore->add_option("--mode", s_mode, "spoken|written");
  rescore->add_option("--vocab-written", s_written,
                      "written vocabulary (spoken mode)");
  rescore->add_option("--verbalizer", s_verb, "verbalizer FST (spoken mode)");
  rescore->add_option("--lm", s_lm, "ARPA language model")->required();
  rescore->add_option("--lm-scale", s_scale, "LM weight");
  rescore->add_option("--top-k", s_topk, "alternatives per frame");
  rescore->add_option("--manifest", s_manifest, "feature manifest")
      ->required();
  rescore->add_option("--out", s_out, "rescored hypotheses JSONL")->required();

  // filter-captions
  auto* filter = app.add_subcommand(
      "filter-captions", "keep islands where captions match the recognizer");
  std::string c_in, c_out, c_stats;
  int c_min_island = 3;
  filter->add_option("--in", c_in, "JSONL {id, caption, hyp_words}")
      ->required();
  filter->add_option("--min-island", c_min_island, "minimum matching run");
  filter->add_option("--out", c_out, "islands JSONL")->required();
  filter->add_option("--stats", c_stats, "retention CSV");

  // score
  auto* score =
      app.add_subcommand("score", "word error rate against references");
  std::string e_refs, e_hyps, e_mode = "written", e_verb, e_written, e_spoken,
              e_report, e_dump;
  score->add_option("--refs", e_refs, "JSONL {id, words}")->required();
  score->add_option("--hyps", e_hyps, "JSONL {id, words}")->required();
  score->add_option("--mode", e_mode, "written|spoken");
  score->add_option("--verbalizer", e_verb, "verbalizer FST (spoken mode)");
  score->add_option("--vocab-written", e_written,
                    "written vocabulary (spoken mode)");
  score->add_option("--vocab-spoken", e_spoken,
                    "spoken vocabulary (spoken mode)");
  score->add_option("--report", e_report, "JSON report path");
  score->add_option("--dump", e_dump, "aligned text dump path");

  for (CLI::App* cmd : app.get_subcommands({})) config.Apply(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message and usage hint
    return 2;
  }

  if (featurize->parsed()) {
    fcfg.window_length = f_window_ms / 1000.0;
    fcfg.hop = f_hop_ms / 1000.0;
    return RunFeaturize(f_manifest, f_outdir, f_outmanifest, fcfg);
  }
  if (build_vocab->parsed()) {
    if (v_domain != "written" && v_domain != "spoken") {
      throw Error("ConfigError", "--domain must be written or spoken");
    }
    return RunBuildVocab(v_corpus, v_min_count, v_domain, v_out);
  }
  if (build_verb->parsed()) {
    return RunBuildVerbalizer(b_rules, b_written, b_spoken, b_out, b_symbols);
  }
  if (train_lm->parsed()) {
    return RunTrainLm(l_corpus, l_order, l_vocab, l_out);
  }
  if (train->parsed()) {
    if (t_loss != "ctc" && t_loss != "ce") {
      throw Error("ConfigError", "--loss must be ctc or ce");
    }
    return RunTrain(t_manifest, t_vocab, t_depths, t_hidden, t_loss, t_align,
                    t_warm, tcfg, t_ckpt);
  }
  if (recognize->parsed()) {
    return RunRecognize(r_ckpt, r_vocab, r_manifest, r_out, r_workers);
  }
  if (rescore->parsed()) {
    if (s_mode != "written" && s_mode != "spoken") {
      throw Error("ConfigError", "--mode must be written or spoken");
    }
    if (s_mode == "spoken" && (s_written.empty() || s_verb.empty())) {
      throw Error("ConfigError",
                  "spoken mode needs --vocab-written and --verbalizer");
    }
    return RunRescore(s_ckpt, s_vocab, s_mode, s_written, s_verb, s_lm,
                      s_scale, s_topk, s_manifest, s_out);
  }
  if (filter->parsed()) {
    return RunFilterCaptions(c_in, c_min_island, c_out, c_stats);
  }
  if (score->parsed()) {
    if (e_mode != "written" && e_mode != "spoken") {
      throw Error("ConfigError", "--mode must be written or spoken");
    }
    if (e_mode == "spoken" &&
        (e_verb.empty() || e_written.empty() || e_spoken.empty())) {
      throw Error("ConfigError",
                  "spoken mode needs --verbalizer, --vocab-written and "
                  "--vocab-spoken");
    }
    return RunScore(e_refs, e_hyps, e_mode, e_verb, e_written, e_spoken,
                    e_report, e_dump);
  }
  std::cout << app.help() << std::endl;
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
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << std::endl;
    return 1;
  }
}
