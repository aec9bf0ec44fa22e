#pragma once

#include <optional>
#include <string>
#include <vector>

#include "senhead/text.hpp"

namespace senhead {

// One article/headline pair. "comments" is the distant-supervision proxy
// signal; "sen_score" is filled in by the scorer. "label" marks scorer
// training rows (1 sensational, 0 generated-negative).
struct CorpusRecord {
  std::string article;
  std::string headline;
  std::optional<long long> comments;
  std::optional<double> sen_score;
  std::optional<int> label;
};

using Corpus = std::vector<CorpusRecord>;

struct LoadStats {
  size_t records = 0;
  size_t truncated_articles = 0;
  size_t truncated_headlines = 0;
};

struct LoadOptions {
  int max_article_tokens = 0;   // 0 = no truncation
  int max_headline_tokens = 0;  // 0 = no truncation
};

// JSON-lines, one object per record, UTF-8. Unknown keys are ignored on
// read and never written.
Corpus load_corpus(const std::string& path, const LoadOptions& opts = {},
                   LoadStats* stats = nullptr);
void save_corpus(const Corpus& corpus, const std::string& path);

std::string corpus_to_jsonl(const Corpus& corpus);
Corpus corpus_from_jsonl(const std::string& text, const LoadOptions& opts = {},
                         LoadStats* stats = nullptr);

}  // namespace senhead
