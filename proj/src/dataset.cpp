#include "senhead/dataset.hpp"

#include <algorithm>
#include <set>

#include "senhead/seq2seq.hpp"

namespace senhead {

void SyntheticSpec::validate() const {
  require(content_vocab_size > 0, "SyntheticSpec: content_vocab_size must be positive");
  require(!marker_vocab.empty(), "SyntheticSpec: marker vocab empty");
  require(marker_rate >= 0.0 && marker_rate <= 1.0, "SyntheticSpec: marker_rate ",
          marker_rate, " outside [0,1]");
  require(article_len_min >= 1 && article_len_max >= article_len_min,
          "SyntheticSpec: bad article length range");
  require(headline_len_min >= 1 && headline_len_max >= headline_len_min,
          "SyntheticSpec: bad headline length range");
  std::set<std::string> markers(marker_vocab.begin(), marker_vocab.end());
  require(markers.size() == marker_vocab.size(), "SyntheticSpec: duplicate marker tokens");
  for (const auto& m : marker_vocab)
    require(!m.starts_with("w"), "SyntheticSpec: marker '", m,
            "' collides with the content token namespace");
}

namespace {
std::string content_token(int k) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "w%03d", k);
  return buf;
}
}  // namespace

Corpus gen_synthetic(const SyntheticSpec& spec, int n_records) {
  spec.validate();
  require(n_records >= 0, "gen_synthetic: negative record count");
  Rng rng(spec.seed);

  // Skewed content distribution: the tail stays rare enough to fall out of a
  // capped vocab, which keeps the copy path exercised end to end.
  std::vector<double> weights(static_cast<size_t>(spec.content_vocab_size));
  for (int k = 0; k < spec.content_vocab_size; ++k)
    weights[static_cast<size_t>(k)] = 1.0 / static_cast<double>(k + 3);

  Corpus corpus;
  corpus.reserve(static_cast<size_t>(n_records));
  for (int i = 0; i < n_records; ++i) {
    const int m =
        spec.article_len_min + rng.uniform_int(spec.article_len_max - spec.article_len_min + 1);
    TokenList article;
    article.reserve(static_cast<size_t>(m));
    for (int t = 0; t < m; ++t) article.push_back(content_token(rng.categorical(weights)));

    const int start = rng.uniform_int(std::min(3, m));
    int len = spec.headline_len_min +
              rng.uniform_int(spec.headline_len_max - spec.headline_len_min + 1);
    len = std::min(len, m - start);
    len = std::max(len, 1);
    TokenList headline(article.begin() + start, article.begin() + start + len);

    const bool sensational = rng.bernoulli(spec.marker_rate);
    if (sensational) {
      const int k = 1 + rng.uniform_int(2);
      TokenList markers;
      for (int j = 0; j < k; ++j)
        markers.push_back(
            spec.marker_vocab[static_cast<size_t>(rng.uniform_int(
                static_cast<int>(spec.marker_vocab.size())))]);
      headline.insert(headline.begin(), markers.begin(), markers.end());
    }

    CorpusRecord r;
    r.article = join_tokens(article);
    r.headline = join_tokens(headline);
    r.comments = sensational ? kSensationalComments : kPlainComments;
    corpus.push_back(std::move(r));
  }
  return corpus;
}

Corpus filter_by_comments(const Corpus& corpus, long long min_comments, size_t* skipped) {
  Corpus out;
  size_t missing = 0;
  for (const auto& r : corpus) {
    if (!r.comments) {
      ++missing;
      continue;
    }
    if (*r.comments >= min_comments) out.push_back(r);
  }
  if (skipped) *skipped = missing;
  return out;
}

Corpus label_by_comments(const Corpus& corpus, long long pos_min, long long neg_max) {
  require(neg_max <= pos_min, "label_by_comments: neg_max ", neg_max, " above pos_min ",
          pos_min);
  Corpus out;
  for (const auto& r : corpus) {
    if (!r.comments) continue;
    CorpusRecord labeled = r;
    if (*r.comments >= pos_min)
      labeled.label = 1;
    else if (*r.comments < neg_max)
      labeled.label = 0;
    else
      continue;
    out.push_back(std::move(labeled));
  }
  return out;
}

Corpus balance_and_shuffle(const Corpus& labeled, uint64_t seed) {
  Corpus pos, neg;
  for (const auto& r : labeled) {
    require(r.label.has_value(), "balance_and_shuffle: record without label");
    (*r.label == 1 ? pos : neg).push_back(r);
  }
  Rng rng(Rng::mix(seed, 0xba1aceULL));
  rng.shuffle(pos);
  rng.shuffle(neg);
  const size_t n = std::min(pos.size(), neg.size());
  pos.resize(n);
  neg.resize(n);
  Corpus out;
  out.reserve(2 * n);
  out.insert(out.end(), pos.begin(), pos.end());
  out.insert(out.end(), neg.begin(), neg.end());
  rng.shuffle(out);
  return out;
}

Corpus build_distant_dataset(const Corpus& positives, Seq2SeqModel& summarizer,
                             const Corpus& articles, int beam, int max_decode_len,
                             uint64_t seed) {
  require(!positives.empty(), "build_distant_dataset: no positive headlines");
  require(!articles.empty(), "build_distant_dataset: no articles for negatives");
  Corpus labeled;
  labeled.reserve(positives.size() + articles.size());
  for (const auto& r : positives) {
    CorpusRecord rec = r;
    rec.label = 1;
    labeled.push_back(std::move(rec));
  }
  for (const auto& r : articles) {
    const TokenList article = whitespace_tokenize(r.article);
    require(!article.empty(), "build_distant_dataset: empty article");
    TokenList generated = summarizer.decode_tokens(article, beam, max_decode_len);
    if (generated.empty()) continue;  // degenerate decode, drop
    CorpusRecord rec;
    rec.article = r.article;
    rec.headline = join_tokens(generated);
    rec.label = 0;
    labeled.push_back(std::move(rec));
  }
  return balance_and_shuffle(labeled, seed);
}

}  // namespace senhead
