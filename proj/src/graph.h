// src/graph.h

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

#ifndef FHKIT_GRAPH_H_
#define FHKIT_GRAPH_H_

#include <string>
#include <vector>

#include "inventory.h"
#include "lexicon.h"

namespace fhkit {

// Strict 3-state left-to-right topology, no skips. Loop and forward
// probabilities must form a distribution per emitting state.
struct Topology {
  double loop_logprob;
  double forward_logprob;
  double silence_loop_logprob;
  double silence_forward_logprob;
  bool allow_optional_silence = true;

  static Topology Default() { return FromProbs(0.5, 0.5, true); }
  static Topology FromProbs(double loop_prob, double silence_loop_prob,
                            bool allow_optional_silence);
  void Validate() const;
};

struct GraphNode {
  StateClass state_class;
  FactoredIndices factored;
  int word = -1;      // transcript position / vocabulary id; -1 for silence
  int word_pos = -1;  // state index within the word chain; -1 for silence
};

// Forward mass is split uniformly across forward successors so that each
// node's outgoing acoustic probabilities sum to one; LM weights ride on
// word-transition arcs separately.
struct GraphArc {
  int from = 0;
  int to = 0;
  double am_logprob = 0.0;
  double lm_logprob = 0.0;
};

struct TerminalWeight {
  int node = 0;
  double lm_logprob = 0.0;
};

struct StateGraphCore {
  std::vector<GraphNode> nodes;
  std::vector<GraphArc> arcs;
  std::vector<TerminalWeight> start;
  std::vector<TerminalWeight> finals;

  // Arc ids grouped by target / source node; built once after construction.
  std::vector<std::vector<int>> in_arcs;
  std::vector<std::vector<int>> out_arcs;

  int NumNodes() const { return static_cast<int>(nodes.size()); }
  void BuildAdjacency();
  std::string ToJson() const;
};

// All valid state sequences of one transcript under the HMM topology.
struct TrainingGraph {
  StateGraphCore core;
  std::vector<std::string> transcript;
};

// Lexicon x bigram LM composition with a word loop.
struct DecodingGraph {
  StateGraphCore core;
  std::vector<std::string> vocab;
};

TrainingGraph BuildTrainingGraph(const Lexicon& lexicon,
                                 const PhonemeInventory& inv,
                                 const std::vector<std::string>& transcript,
                                 const Topology& topo);

DecodingGraph BuildDecodingGraph(const Lexicon& lexicon,
                                 const PhonemeInventory& inv,
                                 const BigramLm& lm, const Topology& topo);

// Number of emitting nodes on the shortest start->final path; the minimum
// feasible frame count for the graph.
int MinPathLength(const TrainingGraph& graph);

// True when the packed label sequence corresponds to some topology-valid
// start->final node path of the graph.
bool ValidateAlignment(const TrainingGraph& graph, const PhonemeInventory& inv,
                       const std::vector<uint32_t>& labels);

}  // namespace fhkit

#endif  // FHKIT_GRAPH_H_
