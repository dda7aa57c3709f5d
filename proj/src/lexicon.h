// src/lexicon.h

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

#ifndef FHKIT_LEXICON_H_
#define FHKIT_LEXICON_H_

#include <map>
#include <string>
#include <vector>

#include "inventory.h"

namespace fhkit {

// Word -> pronunciations (phoneme ordinal sequences). Multiple
// pronunciations are kept but only the first one is used downstream;
// the pronunciation distribution is treated as deterministic.
class Lexicon {
 public:
  Lexicon() = default;

  void AddWord(const std::string& word,
               const std::vector<std::vector<std::string>>& pronunciations,
               const PhonemeInventory& inv);

  bool Contains(const std::string& word) const {
    return entries_.count(word) > 0;
  }
  // First pronunciation of the word, as phoneme ordinals.
  const std::vector<int>& Pronunciation(const std::string& word) const;
  int NumWords() const { return static_cast<int>(entries_.size()); }
  std::vector<std::string> Words() const;

  std::string ToJson(const PhonemeInventory& inv) const;
  static Lexicon FromJson(const std::string& json_text,
                          const PhonemeInventory& inv);

 private:
  std::map<std::string, std::vector<std::vector<int>>> entries_;
};

// Bigram LM with add-k smoothing over the closed vocabulary.
// Contexts are <s> and every word; successors are every word and </s>.
class BigramLm {
 public:
  static constexpr const char* kSentenceBegin = "<s>";
  static constexpr const char* kSentenceEnd = "</s>";

  BigramLm() = default;
  BigramLm(std::vector<std::string> vocab,
           const std::map<std::string, int64_t>& bigram_counts,
           double smoothing_k);

  int VocabSize() const { return static_cast<int>(vocab_.size()); }
  const std::vector<std::string>& Vocab() const { return vocab_; }
  int WordId(const std::string& word) const;  // throws on unknown

  // log P(word v | previous u); u == -1 denotes <s>.
  double LogProb(int prev, int word) const;
  // log P(</s> | previous u).
  double LogProbEnd(int prev) const;

  static BigramLm FromJson(const std::string& json_text);
  static BigramLm FromCounts(const std::vector<std::string>& vocab,
                             const std::vector<std::vector<std::string>>& sentences,
                             double smoothing_k);
  std::string ToJson() const;

 private:
  void Build();

  std::vector<std::string> vocab_;
  std::map<std::string, int64_t> counts_;  // "u v" keys with <s>/</s> tokens
  double smoothing_k_ = 1.0;
  // Row r: context (0..V-1 words, V = <s>); column c: successor
  // (0..V-1 words, V = </s>).
  std::vector<std::vector<double>> logprob_;
};

}  // namespace fhkit

#endif  // FHKIT_LEXICON_H_
