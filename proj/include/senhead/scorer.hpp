#pragma once

#include "senhead/corpus.hpp"
#include "senhead/params.hpp"
#include "senhead/tape.hpp"
#include "senhead/text.hpp"

namespace senhead {

struct ScorerConfig {
  int emb_dim = 300;
  int channels = 64;
  // conv widths are fixed at {1,3,5}

  void validate() const {
    require(emb_dim > 0 && channels > 0, "ScorerConfig: emb/channels must be positive");
  }
};

constexpr int kScorerWidths[3] = {1, 3, 5};
constexpr int kScorerMinLen = 5;  // headlines padded up to the widest filter

// One-layer text CNN over a fixed (never trained) embedding table: conv
// banks of widths 1/3/5, ReLU, masked max over time, linear projection,
// sigmoid. The score doubles as the RL reward and the ARL mixing weight.
class ScorerModel {
 public:
  ScorerModel(Vocab vocab, ScorerConfig cfg, uint64_t init_seed);
  ScorerModel(Vocab vocab, ScorerConfig cfg, ParamStore params);

  const Vocab& vocab() const { return vocab_; }
  const ScorerConfig& config() const { return cfg_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  // Deterministic score in (0,1). Trailing PAD tokens are ignored, so the
  // score is invariant to padding length. Pure forward pass; thread-safe.
  double score(const TokenList& headline) const;
  double logit(const TokenList& headline) const;

  // Training-path loss on the tape. The embedding table enters as a
  // constant, so no gradient can reach it.
  Var build_bce_loss(Tape& tape, const TokenList& headline, int label);

 private:
  std::vector<int> prepare_ids(const TokenList& headline, int* real_len) const;

  Vocab vocab_;
  ScorerConfig cfg_;
  ParamStore params_;
};

struct ScorerTrainOptions {
  AdamConfig adam{.lr = 1e-4};
  int batch = 64;
  int max_epochs = 20;
  int patience = 3;
  double clip = 2.0;
  uint64_t seed = 1;
};

struct ScorerTrainResult {
  double best_val_accuracy = 0.0;
  int epochs_run = 0;
  std::vector<double> val_accuracy_history;
};

// Labeled records (label 0/1 on every row) -> trained model. Errors on a
// single-class training set. Keeps the best-validation parameters.
ScorerTrainResult train_scorer(ScorerModel& model, const Corpus& train,
                               const Corpus& val, const ScorerTrainOptions& opts);

double scorer_accuracy(const ScorerModel& model, const Corpus& labeled);

struct ScoreSummary {
  double mean = 0.0;
  size_t count = 0;
  std::array<size_t, 10> histogram{};  // [0,0.1), ..., [0.9,1.0]
};

// Annotates every record's sen_score (overwriting) and reports the mean,
// which is exactly the expected MLE fraction under the auto-tuned loss.
ScoreSummary score_corpus(Corpus& corpus, const ScorerModel& model);

}  // namespace senhead
