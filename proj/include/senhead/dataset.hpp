#pragma once

#include <cstdint>

#include "senhead/corpus.hpp"

namespace senhead {

class Seq2SeqModel;

// Marker-token corpus generator. Articles are random content tokens drawn
// from a skewed distribution (so a vocab cap below content_vocab_size leaves
// a copy-only tail); headlines are a short span of their own article, with
// 1-2 marker tokens prepended on a marker_rate coin flip. Marker headlines
// get a high comment count, plain ones a low count, so comment-threshold
// labeling reproduces the marker split exactly.
struct SyntheticSpec {
  int content_vocab_size = 60;
  TokenList marker_vocab = {"m00", "m01", "m02", "m03", "m04", "m05"};
  double marker_rate = 0.3;
  int article_len_min = 10;
  int article_len_max = 14;
  int headline_len_min = 4;
  int headline_len_max = 6;
  uint64_t seed = 1;

  void validate() const;
};

constexpr long long kSensationalComments = 100;
constexpr long long kPlainComments = 0;

Corpus gen_synthetic(const SyntheticSpec& spec, int n_records);

// Records with comments >= min_comments. Records without a comment count are
// skipped; their number is reported through skipped.
Corpus filter_by_comments(const Corpus& corpus, long long min_comments,
                          size_t* skipped = nullptr);

// Distant-supervision labels from the comment proxy: >= pos_min -> 1,
// < neg_max -> 0, anything between dropped.
Corpus label_by_comments(const Corpus& corpus, long long pos_min = 28,
                         long long neg_max = 5);

// Downsamples the larger class to the smaller, then shuffles. Labels must be
// present on every record.
Corpus balance_and_shuffle(const Corpus& labeled, uint64_t seed);

// Positives are the given headlines; negatives are beam-search outputs of the
// summarizer over `articles`. Output is balanced and shuffled.
Corpus build_distant_dataset(const Corpus& positives, Seq2SeqModel& summarizer,
                             const Corpus& articles, int beam, int max_decode_len,
                             uint64_t seed);

}  // namespace senhead
