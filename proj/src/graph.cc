// src/graph.cc

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

#include "graph.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace fhkit {

using nlohmann::json;

Topology Topology::FromProbs(double loop_prob, double silence_loop_prob,
                             bool allow_optional_silence) {
  if (loop_prob <= 0 || loop_prob >= 1 || silence_loop_prob <= 0 ||
      silence_loop_prob >= 1)
    throw DataError("loop probabilities must lie in (0, 1)");
  Topology topo;
  topo.loop_logprob = std::log(loop_prob);
  topo.forward_logprob = std::log1p(-loop_prob);
  topo.silence_loop_logprob = std::log(silence_loop_prob);
  topo.silence_forward_logprob = std::log1p(-silence_loop_prob);
  topo.allow_optional_silence = allow_optional_silence;
  return topo;
}

void Topology::Validate() const {
  auto check = [](double loop, double forward) {
    if (loop > 0 || forward > 0)
      throw DataError("transition log probabilities must be <= 0");
    if (std::abs(std::exp(loop) + std::exp(forward) - 1.0) > 1e-12)
      throw DataError("loop and forward probabilities must sum to 1");
  };
  check(loop_logprob, forward_logprob);
  check(silence_loop_logprob, silence_forward_logprob);
}

void StateGraphCore::BuildAdjacency() {
  in_arcs.assign(nodes.size(), {});
  out_arcs.assign(nodes.size(), {});
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
    in_arcs[arcs[a].to].push_back(a);
    out_arcs[arcs[a].from].push_back(a);
  }
}

std::string StateGraphCore::ToJson() const {
  json j;
  j["nodes"] = json::array();
  for (const auto& n : nodes) {
    j["nodes"].push_back({{"left", n.state_class.left},
                          {"center", n.state_class.center},
                          {"state", n.state_class.hmm_state},
                          {"right", n.state_class.right},
                          {"word", n.word},
                          {"word_pos", n.word_pos}});
  }
  j["arcs"] = json::array();
  for (const auto& a : arcs)
    j["arcs"].push_back({a.from, a.to, a.am_logprob, a.lm_logprob});
  j["start"] = json::array();
  for (const auto& s : start) j["start"].push_back({s.node, s.lm_logprob});
  j["final"] = json::array();
  for (const auto& f : finals) j["final"].push_back({f.node, f.lm_logprob});
  return j.dump();
}

namespace {

struct Builder {
  const PhonemeInventory& inv;
  const Topology& topo;
  StateGraphCore core;
  // Forward successors per node; arcs are materialized at the end so the
  // forward mass can be split.
  std::vector<std::vector<std::pair<int, double>>> succ;  // to, lm logprob

  explicit Builder(const PhonemeInventory& inventory, const Topology& topology)
      : inv(inventory), topo(topology) {}

  int AddNode(const StateClass& sc, int word, int word_pos) {
    inv.Check(sc);
    GraphNode node;
    node.state_class = sc;
    node.factored = inv.ToFactored(sc);
    node.word = word;
    node.word_pos = word_pos;
    core.nodes.push_back(node);
    succ.emplace_back();
    return core.NumNodes() - 1;
  }

  int AddSilence() { return AddNode(inv.SilenceClass(), -1, -1); }

  // Emitting chain for one word; returns (first, last) node ids.
  std::pair<int, int> AddWordChain(const std::vector<int>& phones, int word) {
    int first = -1, prev = -1;
    const int k = static_cast<int>(phones.size());
    for (int j = 0; j < k; ++j) {
      StateClass sc;
      sc.left = j > 0 ? phones[j - 1] : inv.BoundaryLabel();
      sc.center = phones[j];
      sc.right = j + 1 < k ? phones[j + 1] : inv.BoundaryLabel();
      for (int i = 0; i < 3; ++i) {
        sc.hmm_state = i;
        int id = AddNode(sc, word, 3 * j + i);
        if (prev >= 0) succ[prev].emplace_back(id, 0.0);
        if (first < 0) first = id;
        prev = id;
      }
    }
    return {first, prev};
  }

  void Link(int from, int to, double lm = 0.0) { succ[from].emplace_back(to, lm); }

  bool IsSilenceNode(int id) const { return core.nodes[id].word < 0; }

  StateGraphCore Finish() {
    const int n = core.NumNodes();
    for (int q = 0; q < n; ++q) {
      const bool sil = IsSilenceNode(q);
      const double loop = sil ? topo.silence_loop_logprob : topo.loop_logprob;
      const double forward =
          sil ? topo.silence_forward_logprob : topo.forward_logprob;
      core.arcs.push_back({q, q, loop, 0.0});
      if (succ[q].empty()) continue;
      const double split = forward - std::log(static_cast<double>(succ[q].size()));
      for (const auto& [to, lm] : succ[q])
        core.arcs.push_back({q, to, split, lm});
    }
    core.BuildAdjacency();
    return std::move(core);
  }
};

}  // namespace

TrainingGraph BuildTrainingGraph(const Lexicon& lexicon,
                                 const PhonemeInventory& inv,
                                 const std::vector<std::string>& transcript,
                                 const Topology& topo) {
  topo.Validate();
  if (transcript.empty()) throw DataError("empty transcript");
  Builder b(inv, topo);
  const bool opt_sil = topo.allow_optional_silence;
  const int n_words = static_cast<int>(transcript.size());

  int lead_sil = opt_sil ? b.AddSilence() : -1;
  std::vector<std::pair<int, int>> chains(n_words);
  std::vector<int> gap_sil(n_words, -1);  // silence after word w
  for (int w = 0; w < n_words; ++w) {
    chains[w] = b.AddWordChain(lexicon.Pronunciation(transcript[w]), w);
    if (opt_sil) gap_sil[w] = b.AddSilence();
  }

  if (opt_sil) b.Link(lead_sil, chains[0].first);
  for (int w = 0; w + 1 < n_words; ++w) {
    b.Link(chains[w].second, chains[w + 1].first);
    if (opt_sil) {
      b.Link(chains[w].second, gap_sil[w]);
      b.Link(gap_sil[w], chains[w + 1].first);
    }
  }
  if (opt_sil) b.Link(chains[n_words - 1].second, gap_sil[n_words - 1]);

  TrainingGraph graph;
  graph.transcript = transcript;
  graph.core = b.Finish();
  graph.core.start.push_back({chains[0].first, 0.0});
  if (opt_sil) graph.core.start.push_back({lead_sil, 0.0});
  graph.core.finals.push_back({chains[n_words - 1].second, 0.0});
  if (opt_sil) graph.core.finals.push_back({gap_sil[n_words - 1], 0.0});
  return graph;
}

DecodingGraph BuildDecodingGraph(const Lexicon& lexicon,
                                 const PhonemeInventory& inv,
                                 const BigramLm& lm, const Topology& topo) {
  topo.Validate();
  const int v = lm.VocabSize();
  if (v == 0) throw DataError("empty decoding vocabulary");
  for (const auto& word : lm.Vocab()) {
    if (!lexicon.Contains(word))
      throw DataError("LM word missing from lexicon: " + word);
  }

  Builder b(inv, topo);
  const bool opt_sil = topo.allow_optional_silence;
  std::vector<std::pair<int, int>> chains(v);
  for (int w = 0; w < v; ++w)
    chains[w] = b.AddWordChain(lexicon.Pronunciation(lm.Vocab()[w]), w);
  std::vector<int> exit_sil(v, -1);
  if (opt_sil)
    for (int w = 0; w < v; ++w) exit_sil[w] = b.AddSilence();
  int start_sil = opt_sil ? b.AddSilence() : -1;

  for (int u = 0; u < v; ++u) {
    if (opt_sil) b.Link(chains[u].second, exit_sil[u]);
    for (int w = 0; w < v; ++w) {
      const double lp = lm.LogProb(u, w);
      if (lp == kLogZero) continue;  // zero-probability bigram: prune
      b.Link(chains[u].second, chains[w].first, lp);
      if (opt_sil) b.Link(exit_sil[u], chains[w].first, lp);
    }
  }
  if (opt_sil) {
    for (int w = 0; w < v; ++w) {
      const double lp = lm.LogProb(-1, w);
      if (lp != kLogZero) b.Link(start_sil, chains[w].first, lp);
    }
  }

  DecodingGraph graph;
  graph.vocab = lm.Vocab();
  graph.core = b.Finish();
  for (int w = 0; w < v; ++w) {
    const double lp = lm.LogProb(-1, w);
    if (lp != kLogZero) graph.core.start.push_back({chains[w].first, lp});
  }
  if (opt_sil) graph.core.start.push_back({start_sil, 0.0});
  for (int u = 0; u < v; ++u) {
    const double lp = lm.LogProbEnd(u);
    if (lp == kLogZero) continue;
    graph.core.finals.push_back({chains[u].second, lp});
    if (opt_sil) graph.core.finals.push_back({exit_sil[u], lp});
  }
  if (opt_sil && lm.LogProbEnd(-1) != kLogZero)
    graph.core.finals.push_back({start_sil, lm.LogProbEnd(-1)});
  if (graph.core.start.empty() || graph.core.finals.empty())
    throw DataError("decoding graph has no start or final states");
  return graph;
}

int MinPathLength(const TrainingGraph& graph) {
  const auto& core = graph.core;
  const int n = core.NumNodes();
  const int inf = n + 1;
  std::vector<int> dist(n, inf);
  for (const auto& s : core.start) dist[s.node] = 1;
  // Non-loop arcs go from lower to higher ids by construction.
  for (const auto& arc : core.arcs) {
    if (arc.from == arc.to) continue;
    if (dist[arc.from] + 1 < dist[arc.to]) dist[arc.to] = dist[arc.from] + 1;
  }
  int best = inf;
  for (const auto& f : core.finals) best = std::min(best, dist[f.node]);
  if (best >= inf) throw DataError("training graph has no start->final path");
  return best;
}

bool ValidateAlignment(const TrainingGraph& graph, const PhonemeInventory& inv,
                       const std::vector<uint32_t>& labels) {
  if (labels.empty()) return false;
  const auto& core = graph.core;
  const int n = core.NumNodes();
  std::vector<uint32_t> packed(n);
  for (int q = 0; q < n; ++q) packed[q] = inv.Pack(core.nodes[q].state_class);

  std::vector<char> active(n, 0);
  for (const auto& s : core.start)
    if (packed[s.node] == labels[0]) active[s.node] = 1;
  for (size_t t = 1; t < labels.size(); ++t) {
    std::vector<char> next(n, 0);
    for (const auto& arc : core.arcs) {
      if (active[arc.from] && packed[arc.to] == labels[t]) next[arc.to] = 1;
    }
    active.swap(next);
  }
  for (const auto& f : core.finals)
    if (active[f.node]) return true;
  return false;
}

}  // namespace fhkit
