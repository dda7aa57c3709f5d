// src/io.h

// Copyright 2026  fhkit authors
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

#ifndef FHKIT_IO_H_
#define FHKIT_IO_H_

#include <optional>
#include <string>
#include <vector>

#include "align.h"
#include "dataset.h"
#include "net.h"
#include "prior.h"

namespace fhkit {

// Reproducibility header written into every text output.
struct ReproHeader {
  uint64_t seed = 0;
  std::string config_hash;
  std::string inventory_hash;
};

// Feature files: "FHF1", u32 version, u32 T, u32 D, then T*D little-endian
// f32 values in row-major order.
void WriteFeatures(const std::string& path, const Eigen::MatrixXd& features);
Eigen::MatrixXd ReadFeatures(const std::string& path);

// Alignment caches: JSON lines; first line carries the header with the
// inventory hash, then {"id", "labels", "provenance"} per utterance.
void WriteAlignmentCache(const std::string& path,
                         const std::vector<AlignmentEntry>& entries,
                         const ReproHeader& header);
std::vector<AlignmentEntry> ReadAlignmentCache(const std::string& path,
                                               std::string* inventory_hash);

struct CheckpointMeta {
  std::string trained_with = "init";  // init|fs|ce
  int epoch = 0;
  double lr = 0.0;
  uint64_t seed = 0;
  std::string config_hash;
};

// Checkpoints: "FHCK", u32 version, u32 metadata length, metadata JSON
// (inventory, context order, encoder config, schedules), then every tensor
// as little-endian f32 in declared order; priors ride along as tensors.
void WriteCheckpoint(const std::string& path, const FactoredModel& model,
                     const PriorState& priors, const CheckpointMeta& meta);

struct LoadedCheckpoint {
  FactoredModel model;
  PriorState priors;
  CheckpointMeta meta;
};
LoadedCheckpoint ReadCheckpoint(const std::string& path);

struct ManifestEntry {
  std::string id;
  std::string feature_file;  // relative to the manifest directory
  std::vector<std::string> transcript;
};

void WriteManifest(const std::string& path,
                   const std::vector<ManifestEntry>& entries,
                   const ReproHeader& header);
std::vector<ManifestEntry> ReadManifest(const std::string& path,
                                        ReproHeader* header = nullptr);

struct HypothesisEntry {
  std::string id;
  std::vector<std::string> words;
  double score = 0.0;
};

// CTM-like hypothesis file: one line per utterance with id, path score and
// the word sequence.
void WriteHypotheses(const std::string& path,
                     const std::vector<HypothesisEntry>& entries,
                     const ReproHeader& header);
std::vector<HypothesisEntry> ReadHypotheses(const std::string& path);

// Corpus directory layout: inventory.json, lexicon.json, lm.json,
// manifest[.test].jsonl, features/<id>.fhf, gt[.test].align.jsonl.
Dataset LoadDataset(const std::string& corpus_dir,
                    const std::string& manifest_name, const Topology& topo);

// Attach alignment labels to matching utterances; every utterance must be
// covered and lengths must match.
void AttachAlignments(Dataset& dataset,
                      const std::vector<AlignmentEntry>& entries);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace fhkit

#endif  // FHKIT_IO_H_
