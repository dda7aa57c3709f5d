// src/align.cc

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

#include "align.h"

namespace fhkit {

ForcedAlignment ViterbiAlign(const TrainingGraph& graph,
                             const PhonemeInventory& inv,
                             const Eigen::MatrixXd& frame_scores) {
  if (frame_scores.rows() < MinPathLength(graph))
    throw DataError(StrCat("utterance of ", frame_scores.rows(),
                           " frames shorter than minimum path length ",
                           MinPathLength(graph)));
  ViterbiResult vit = ViterbiPath(graph.core, frame_scores);
  ForcedAlignment out;
  out.score = vit.score;
  out.node_path = std::move(vit.path);
  out.labels.reserve(out.node_path.size());
  for (int q : out.node_path)
    out.labels.push_back(inv.Pack(graph.core.nodes[q].state_class));
  return out;
}

std::vector<uint32_t> LinearAlign(const TrainingGraph& graph,
                                  const PhonemeInventory& inv, int frames) {
  const int min_len = MinPathLength(graph);
  if (frames < min_len)
    throw DataError(StrCat("cannot linearly align ", frames,
                           " frames onto a path of length ", min_len));
  // Node ids are laid out along the full chain, so the canonical path with
  // silence is simply every node in id order.
  std::vector<int> path;
  const int n = graph.core.NumNodes();
  if (frames >= n) {
    path.resize(n);
    for (int q = 0; q < n; ++q) path[q] = q;
  } else {
    for (int q = 0; q < n; ++q)
      if (graph.core.nodes[q].word >= 0) path.push_back(q);
  }
  const int k = static_cast<int>(path.size());
  const int base = frames / k;
  const int remainder = frames % k;
  std::vector<uint32_t> labels;
  labels.reserve(frames);
  for (int j = 0; j < k; ++j) {
    const int duration = base + (j < remainder ? 1 : 0);
    const uint32_t packed = inv.Pack(graph.core.nodes[path[j]].state_class);
    labels.insert(labels.end(), duration, packed);
  }
  return labels;
}

AlignmentStats ComputeAlignmentStats(const std::vector<AlignmentEntry>& entries,
                                     const PhonemeInventory& inv) {
  AlignmentStats stats;
  stats.center_state_histogram.assign(inv.CenterStateCount(), 0);
  int64_t silence_frames = 0;
  int64_t segments = 0;
  for (const auto& entry : entries) {
    uint32_t prev = 0;
    bool first = true;
    for (uint32_t packed : entry.labels) {
      const StateClass sc = inv.Unpack(packed);
      const FactoredIndices fi = inv.ToFactored(sc);
      ++stats.center_state_histogram[fi.center_state];
      ++stats.frames;
      if (sc.center == inv.SilenceLabel()) ++silence_frames;
      if (first || packed != prev) ++segments;
      prev = packed;
      first = false;
    }
  }
  if (stats.frames > 0) {
    stats.silence_fraction =
        static_cast<double>(silence_frames) / static_cast<double>(stats.frames);
    stats.mean_state_duration =
        static_cast<double>(stats.frames) / static_cast<double>(segments);
  }
  return stats;
}

std::string ProvenanceForModel(const std::string& trained_with,
                               const std::string& order) {
  if (trained_with == "fs") return "fs-falign";
  return order + "-falign";
}

}  // namespace fhkit
