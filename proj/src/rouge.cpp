#include "senhead/rouge.hpp"

#include <algorithm>
#include <map>

namespace senhead {

RougeScore RougeScore::from_counts(double overlap, double cand_total, double ref_total) {
  RougeScore s;
  s.precision = cand_total > 0.0 ? overlap / cand_total : 0.0;
  s.recall = ref_total > 0.0 ? overlap / ref_total : 0.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

RougeScore rouge_n(const TokenList& candidate, const TokenList& reference, int n) {
  require(n >= 1, "rouge_n: n must be >= 1, got ", n);
  auto ngrams = [n](const TokenList& toks) {
    std::map<std::vector<std::string>, int> counts;
    if (static_cast<int>(toks.size()) >= n)
      for (size_t i = 0; i + n <= toks.size(); ++i)
        ++counts[std::vector<std::string>(toks.begin() + static_cast<long>(i),
                                          toks.begin() + static_cast<long>(i) + n)];
    return counts;
  };
  auto cand = ngrams(candidate);
  auto ref = ngrams(reference);
  double cand_total = 0.0, ref_total = 0.0, overlap = 0.0;
  for (const auto& [g, c] : cand) cand_total += c;
  for (const auto& [g, c] : ref) ref_total += c;
  for (const auto& [g, c] : cand) {
    auto it = ref.find(g);
    if (it != ref.end()) overlap += std::min(c, it->second);
  }
  return RougeScore::from_counts(overlap, cand_total, ref_total);
}

int lcs_length(const TokenList& a, const TokenList& b) {
  const size_t n = a.size(), m = b.size();
  if (n == 0 || m == 0) return 0;
  std::vector<int> prev(m + 1, 0), cur(m + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      if (a[i - 1] == b[j - 1])
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

RougeScore rouge_l(const TokenList& candidate, const TokenList& reference) {
  const double lcs = lcs_length(candidate, reference);
  return RougeScore::from_counts(lcs, static_cast<double>(candidate.size()),
                                 static_cast<double>(reference.size()));
}

CorpusRouge corpus_rouge(const std::vector<TokenList>& candidates,
                         const std::vector<TokenList>& references) {
  require(candidates.size() == references.size(), "corpus_rouge: ", candidates.size(),
          " candidates vs ", references.size(), " references");
  require(!candidates.empty(), "corpus_rouge: empty input");
  CorpusRouge total;
  auto acc = [](RougeScore& dst, const RougeScore& s) {
    dst.precision += s.precision;
    dst.recall += s.recall;
    dst.f1 += s.f1;
  };
  for (size_t i = 0; i < candidates.size(); ++i) {
    acc(total.rouge1, rouge_n(candidates[i], references[i], 1));
    acc(total.rouge2, rouge_n(candidates[i], references[i], 2));
    acc(total.rougeL, rouge_l(candidates[i], references[i]));
  }
  const double n = static_cast<double>(candidates.size());
  for (RougeScore* s : {&total.rouge1, &total.rouge2, &total.rougeL}) {
    s->precision /= n;
    s->recall /= n;
    s->f1 /= n;
  }
  return total;
}

}  // namespace senhead
