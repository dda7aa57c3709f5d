// src/lexicon.cc

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

#include "lexicon.h"

#include <cmath>

#include <nlohmann/json.hpp>

namespace fhkit {

using nlohmann::json;

void Lexicon::AddWord(const std::string& word,
                      const std::vector<std::vector<std::string>>& pronunciations,
                      const PhonemeInventory& inv) {
  if (word.empty()) throw DataError("empty word in lexicon");
  if (pronunciations.empty())
    throw DataError("word has no pronunciation: " + word);
  if (entries_.count(word)) throw DataError("duplicate lexicon word: " + word);
  std::vector<std::vector<int>> prons;
  for (const auto& pron : pronunciations) {
    if (pron.empty())
      throw DataError("empty pronunciation for word: " + word);
    std::vector<int> ordinals;
    ordinals.reserve(pron.size());
    for (const auto& symbol : pron) ordinals.push_back(inv.PhonemeOrdinal(symbol));
    prons.push_back(std::move(ordinals));
  }
  entries_.emplace(word, std::move(prons));
}

const std::vector<int>& Lexicon::Pronunciation(const std::string& word) const {
  auto it = entries_.find(word);
  if (it == entries_.end())
    throw DataError("out-of-vocabulary word: " + word);
  return it->second.front();
}

std::vector<std::string> Lexicon::Words() const {
  std::vector<std::string> words;
  words.reserve(entries_.size());
  for (const auto& [word, prons] : entries_) words.push_back(word);
  return words;
}

std::string Lexicon::ToJson(const PhonemeInventory& inv) const {
  json j = json::object();
  for (const auto& [word, prons] : entries_) {
    json plist = json::array();
    for (const auto& pron : prons) {
      json symbols = json::array();
      for (int p : pron) symbols.push_back(inv.phonemes()[p]);
      plist.push_back(symbols);
    }
    j[word] = plist;
  }
  return j.dump();
}

Lexicon Lexicon::FromJson(const std::string& json_text,
                          const PhonemeInventory& inv) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object())
    throw DataError("malformed lexicon JSON");
  Lexicon lex;
  for (const auto& [word, plist] : j.items()) {
    if (!plist.is_array() || plist.empty())
      throw DataError("word has no pronunciation: " + word);
    std::vector<std::vector<std::string>> prons;
    for (const auto& pron : plist)
      prons.push_back(pron.get<std::vector<std::string>>());
    lex.AddWord(word, prons, inv);
  }
  return lex;
}

BigramLm::BigramLm(std::vector<std::string> vocab,
                   const std::map<std::string, int64_t>& bigram_counts,
                   double smoothing_k)
    : vocab_(std::move(vocab)), counts_(bigram_counts), smoothing_k_(smoothing_k) {
  Build();
}

void BigramLm::Build() {
  if (vocab_.empty()) throw DataError("empty LM vocabulary");
  if (smoothing_k_ < 0) throw DataError("negative smoothing_k");
  const int v = VocabSize();
  std::map<std::string, int> id;
  for (int i = 0; i < v; ++i) {
    if (!id.emplace(vocab_[i], i).second)
      throw DataError("duplicate LM vocab word: " + vocab_[i]);
  }
  auto token_id = [&](const std::string& tok, bool context) -> int {
    if (context && tok == kSentenceBegin) return v;
    if (!context && tok == kSentenceEnd) return v;
    auto it = id.find(tok);
    if (it == id.end()) throw DataError("LM token outside vocabulary: " + tok);
    return it->second;
  };

  std::vector<std::vector<int64_t>> table(v + 1, std::vector<int64_t>(v + 1, 0));
  for (const auto& [key, count] : counts_) {
    auto space = key.find(' ');
    if (space == std::string::npos || count < 0)
      throw DataError("malformed bigram count entry: " + key);
    int u = token_id(key.substr(0, space), /*context=*/true);
    int w = token_id(key.substr(space + 1), /*context=*/false);
    table[u][w] += count;
  }
  logprob_.assign(v + 1, std::vector<double>(v + 1, kLogZero));
  for (int u = 0; u <= v; ++u) {
    int64_t total = 0;
    for (int w = 0; w <= v; ++w) total += table[u][w];
    const double denom = static_cast<double>(total) + smoothing_k_ * (v + 1);
    if (denom <= 0) continue;  // unseen context with k == 0: all successors -inf
    for (int w = 0; w <= v; ++w) {
      const double num = static_cast<double>(table[u][w]) + smoothing_k_;
      logprob_[u][w] = num > 0 ? std::log(num / denom) : kLogZero;
    }
  }
}

int BigramLm::WordId(const std::string& word) const {
  for (int i = 0; i < VocabSize(); ++i)
    if (vocab_[i] == word) return i;
  throw DataError("LM word not in vocabulary: " + word);
}

double BigramLm::LogProb(int prev, int word) const {
  const int v = VocabSize();
  int u = prev < 0 ? v : prev;
  if (u > v || word < 0 || word >= v)
    throw DataError("LM index out of range");
  return logprob_[u][word];
}

double BigramLm::LogProbEnd(int prev) const {
  const int v = VocabSize();
  int u = prev < 0 ? v : prev;
  if (u > v) throw DataError("LM index out of range");
  return logprob_[u][v];
}

BigramLm BigramLm::FromJson(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || !j.contains("vocab"))
    throw DataError("malformed LM JSON");
  std::vector<std::string> vocab = j.at("vocab").get<std::vector<std::string>>();
  std::map<std::string, int64_t> counts;
  if (j.contains("bigram_counts"))
    counts = j.at("bigram_counts").get<std::map<std::string, int64_t>>();
  double k = j.value("smoothing_k", 1.0);
  return BigramLm(std::move(vocab), counts, k);
}

BigramLm BigramLm::FromCounts(const std::vector<std::string>& vocab,
                              const std::vector<std::vector<std::string>>& sentences,
                              double smoothing_k) {
  std::map<std::string, int64_t> counts;
  for (const auto& sentence : sentences) {
    std::string prev = kSentenceBegin;
    for (const auto& word : sentence) {
      counts[prev + " " + word] += 1;
      prev = word;
    }
    counts[prev + " " + std::string(kSentenceEnd)] += 1;
  }
  return BigramLm(vocab, counts, smoothing_k);
}

std::string BigramLm::ToJson() const {
  json j;
  j["vocab"] = vocab_;
  j["bigram_counts"] = counts_;
  j["smoothing_k"] = smoothing_k_;
  return j.dump();
}

}  // namespace fhkit
