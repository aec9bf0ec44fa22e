#pragma once

#include <optional>

#include "senhead/rouge.hpp"
#include "senhead/scorer.hpp"
#include "senhead/seq2seq.hpp"

namespace senhead {

enum class RewardKind { RougeL, Sensationalism };

// Per-step reward regressor R_hat_t = w . o_t + b. Lives in its own store so
// the policy losses can never touch it and vice versa.
struct BaselineModel {
  ParamStore params;

  static BaselineModel init(int feature_dim, uint64_t seed) {
    BaselineModel m;
    Rng rng(seed);
    m.params.create_uniform("baseline.w", {feature_dim}, -0.1, 0.1, rng);
    m.params.create("baseline.b", {1});
    return m;
  }
  static BaselineModel zeros(int feature_dim) {
    BaselineModel m;
    m.params.create("baseline.w", {feature_dim});
    m.params.create("baseline.b", {1});
    return m;
  }

  double predict(const Array& features) const {
    const Array& w = params.value("baseline.w");
    require(w.numel() == features.numel(), "baseline: feature dim ", features.numel(),
            " vs weights ", w.numel());
    double r = params.value("baseline.b").at(0);
    for (int i = 0; i < w.numel(); ++i) r += w.at(i) * features.at(i);
    return r;
  }
};

// Reward in [0,1] on surface token sequences. Empty candidates score 0.
double compute_reward(RewardKind kind, const TokenList& sampled,
                      const TokenList& reference, const ScorerModel* scorer,
                      size_t* empty_warnings = nullptr);

// A sampled rollout with everything the losses and the baseline fit need.
// Advantages are frozen at build time (stop-gradient on R_hat_t).
struct RolloutRecord {
  std::vector<int> ids;
  double reward = 0.0;
  std::vector<double> baseline_values;  // R_hat_t, detached
  std::vector<Array> features;          // o_t values, detached (baseline fit input)
  bool finished = false;
};

struct LossParts {
  Var loss;
  double mle_value = 0.0;
  double rl_value = 0.0;
  double weight_mle = 1.0;  // 1 for pure MLE, lambda-complement or alpha for mixes
  std::optional<RolloutRecord> rollout;
};

// -(1/T) sum log P(y_t*), STOP included.
LossParts build_mle_loss(Tape& tape, Seq2SeqModel& model, const Encoded& enc,
                         const ExtendedExample& ex);

// REINFORCE on a fresh rollout: -(1/T) sum (R - R_hat_t) log P(w_t) with the
// advantage detached.
LossParts build_rl_loss(Tape& tape, Seq2SeqModel& model, const Encoded& enc,
                        const ExtendedExample& ex, RewardKind kind,
                        const ScorerModel* scorer, const BaselineModel& baseline,
                        const SampleOptions& opts, Rng& rng,
                        size_t* empty_warnings = nullptr);

// lambda * L_RL + (1 - lambda) * L_MLE, sharing the encoder pass.
LossParts build_mixed_loss(Tape& tape, Seq2SeqModel& model, const Encoded& enc,
                           const ExtendedExample& ex, RewardKind kind, double lambda,
                           const ScorerModel* scorer, const BaselineModel& baseline,
                           const SampleOptions& opts, Rng& rng,
                           size_t* empty_warnings = nullptr);

// (1 - w) * L_RL + w * L_MLE with w = the training headline's score, passed
// in already computed (scores are cached per example; the scorer is frozen
// during generator training).
LossParts build_arl_loss(Tape& tape, Seq2SeqModel& model, const Encoded& enc,
                         const ExtendedExample& ex, double weight_mle, RewardKind kind,
                         const ScorerModel* scorer, const BaselineModel& baseline,
                         const SampleOptions& opts, Rng& rng,
                         size_t* empty_warnings = nullptr);

// The auto-tuned MLE weight for a training headline: the headline's own
// reward under `kind` (score for Sensationalism, RG(y*,y*)=1 for RougeL,
// which collapses the loss to MLE).
double arl_weight(RewardKind kind, const TokenList& headline, const ScorerModel* scorer);

// REINFORCE loss over a fixed emission sequence with frozen advantages:
// -(1/T) sum adv_t log P(ids_t). This is the deterministic function the
// sampled loss evaluates once ids and advantages are drawn, so it is the
// object finite differences can check.
Var build_replay_rl_loss(Tape& tape, Seq2SeqModel& model, const Encoded& enc,
                         const std::vector<int>& ids,
                         const std::vector<double>& advantages, int min_len = 0);

// One optimizer step of L_b = mean over rollouts of (1/T) sum (R - R_hat_t)^2.
// Gradients reach only the baseline parameters. Returns the loss value.
double fit_baseline(BaselineModel& baseline,
                    const std::vector<const RolloutRecord*>& rollouts,
                    const AdamConfig& adam, double clip);

// Value of L_b for a single rollout under the current baseline.
double baseline_loss_value(const BaselineModel& baseline, const RolloutRecord& rollout);

// Records with sen_score strictly above min_score. Scores must be present.
Corpus filter_corpus(const Corpus& corpus, double min_score);

}  // namespace senhead
