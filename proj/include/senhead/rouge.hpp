#pragma once

#include <vector>

#include "senhead/text.hpp"

namespace senhead {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static RougeScore from_counts(double overlap, double cand_total, double ref_total);
};

// Clipped n-gram overlap. Sequences shorter than n contribute zero counts.
RougeScore rouge_n(const TokenList& candidate, const TokenList& reference, int n);

// LCS-based: P = LCS/len(candidate), R = LCS/len(reference).
RougeScore rouge_l(const TokenList& candidate, const TokenList& reference);

int lcs_length(const TokenList& a, const TokenList& b);

struct CorpusRouge {
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
};

// Arithmetic mean of per-pair scores. Lists must be aligned.
CorpusRouge corpus_rouge(const std::vector<TokenList>& candidates,
                         const std::vector<TokenList>& references);

}  // namespace senhead
