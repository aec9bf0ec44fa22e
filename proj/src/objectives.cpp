#include "senhead/objectives.hpp"

namespace senhead {

double compute_reward(RewardKind kind, const TokenList& sampled,
                      const TokenList& reference, const ScorerModel* scorer,
                      size_t* empty_warnings) {
  if (sampled.empty()) {
    if (empty_warnings) ++*empty_warnings;
    return 0.0;
  }
  double r = 0.0;
  switch (kind) {
    case RewardKind::RougeL:
      r = rouge_l(sampled, reference).f1;
      break;
    case RewardKind::Sensationalism:
      require(scorer != nullptr, "compute_reward: sensationalism reward needs a scorer");
      r = scorer->score(sampled);
      break;
  }
  require(r >= 0.0 && r <= 1.0, "compute_reward: reward ", r, " outside [0,1]");
  return r;
}

namespace {
Var mean_neg(Tape& tape, const std::vector<Var>& terms) {
  require(!terms.empty(), "loss: no terms");
  Var acc = terms[0];
  for (size_t i = 1; i < terms.size(); ++i) acc = tape.add(acc, terms[i]);
  return tape.affine(acc, -1.0 / static_cast<double>(terms.size()), 0.0);
}
}  // namespace

LossParts build_mle_loss(Tape& tape, Seq2SeqModel& model, const Encoded& enc,
                         const ExtendedExample& ex) {
  TeacherForced tf = model.sequence_logprob(tape, enc, ex.headline_input,
                                            ex.headline_target);
  LossParts parts;
  parts.loss = mean_neg(tape, tf.logps);
  parts.mle_value = tape.value(parts.loss).at(0);
  parts.weight_mle = 1.0;
  return parts;
}

namespace {
// Shared by the RL-bearing losses: rollout, reward, frozen advantages.
struct RlTerm {
  Var loss;
  RolloutRecord record;
};

RlTerm build_rl_term(Tape& tape, Seq2SeqModel& model, const Encoded& enc,
                     const ExtendedExample& ex, RewardKind kind,
                     const ScorerModel* scorer, const BaselineModel& baseline,
                     const SampleOptions& opts, Rng& rng, size_t* empty_warnings) {
  SampledSequence rollout = model.sample_sequence(tape, enc, opts, rng);
  RlTerm term;
  term.record.ids = rollout.ids;
  term.record.finished = rollout.finished;

  const TokenList sampled_surface =
      render_surface(rollout.ids, model.vocab(), ex.article_oovs);
  const TokenList reference_surface =
      ids_to_tokens(ex.headline_target, model.vocab(), ex.article_oovs);
  term.record.reward =
      compute_reward(kind, sampled_surface, reference_surface, scorer, empty_warnings);

  const size_t t_len = rollout.logps.size();
  std::vector<Var> weighted;
  weighted.reserve(t_len);
  for (size_t t = 0; t < t_len; ++t) {
    Array feat = tape.value(rollout.features[t]);  // detached copy
    const double rhat = baseline.predict(feat);
    term.record.baseline_values.push_back(rhat);
    term.record.features.push_back(std::move(feat));
    const double advantage = term.record.reward - rhat;
    weighted.push_back(tape.affine(rollout.logps[t], advantage, 0.0));
  }
  term.loss = mean_neg(tape, weighted);
  return term;
}
}  // namespace

LossParts build_rl_loss(Tape& tape, Seq2SeqModel& model, const Encoded& enc,
                        const ExtendedExample& ex, RewardKind kind,
                        const ScorerModel* scorer, const BaselineModel& baseline,
                        const SampleOptions& opts, Rng& rng, size_t* empty_warnings) {
  RlTerm term =
      build_rl_term(tape, model, enc, ex, kind, scorer, baseline, opts, rng, empty_warnings);
  LossParts parts;
  parts.loss = term.loss;
  parts.rl_value = tape.value(parts.loss).at(0);
  parts.weight_mle = 0.0;
  parts.rollout = std::move(term.record);
  return parts;
}

namespace {
LossParts combine(Tape& tape, LossParts mle, RlTerm rl, double weight_mle) {
  LossParts parts;
  parts.mle_value = mle.mle_value;
  parts.rl_value = tape.value(rl.loss).at(0);
  parts.weight_mle = weight_mle;
  parts.rollout = std::move(rl.record);
  parts.loss = tape.add(tape.affine(rl.loss, 1.0 - weight_mle, 0.0),
                        tape.affine(mle.loss, weight_mle, 0.0));
  return parts;
}
}  // namespace

LossParts build_mixed_loss(Tape& tape, Seq2SeqModel& model, const Encoded& enc,
                           const ExtendedExample& ex, RewardKind kind, double lambda,
                           const ScorerModel* scorer, const BaselineModel& baseline,
                           const SampleOptions& opts, Rng& rng, size_t* empty_warnings) {
  require(lambda >= 0.0 && lambda <= 1.0, "mixed loss: lambda ", lambda,
          " outside [0,1]");
  LossParts mle = build_mle_loss(tape, model, enc, ex);
  RlTerm rl =
      build_rl_term(tape, model, enc, ex, kind, scorer, baseline, opts, rng, empty_warnings);
  return combine(tape, std::move(mle), std::move(rl), 1.0 - lambda);
}

LossParts build_arl_loss(Tape& tape, Seq2SeqModel& model, const Encoded& enc,
                         const ExtendedExample& ex, double weight_mle, RewardKind kind,
                         const ScorerModel* scorer, const BaselineModel& baseline,
                         const SampleOptions& opts, Rng& rng, size_t* empty_warnings) {
  require(weight_mle >= 0.0 && weight_mle <= 1.0, "arl loss: weight ", weight_mle,
          " outside [0,1]");
  LossParts mle = build_mle_loss(tape, model, enc, ex);
  RlTerm rl =
      build_rl_term(tape, model, enc, ex, kind, scorer, baseline, opts, rng, empty_warnings);
  return combine(tape, std::move(mle), std::move(rl), weight_mle);
}

double arl_weight(RewardKind kind, const TokenList& headline, const ScorerModel* scorer) {
  switch (kind) {
    case RewardKind::RougeL:
      return rouge_l(headline, headline).f1;
    case RewardKind::Sensationalism:
      require(scorer != nullptr, "arl_weight: sensationalism weighting needs a scorer");
      return scorer->score(headline);
  }
  fail("arl_weight: unknown reward kind");
}

double fit_baseline(BaselineModel& baseline,
                    const std::vector<const RolloutRecord*>& rollouts,
                    const AdamConfig& adam, double clip) {
  require(!rollouts.empty(), "fit_baseline: no rollouts");
  Tape tape;
  Var w = tape.param(baseline.params, "baseline.w");
  Var b = tape.param(baseline.params, "baseline.b");
  std::vector<Var> per_rollout;
  for (const RolloutRecord* r : rollouts) {
    require(!r->features.empty(), "fit_baseline: rollout without features");
    std::vector<Var> sq;
    sq.reserve(r->features.size());
    for (const Array& feat : r->features) {
      Var rhat = tape.add(tape.dot(w, tape.input(feat)), b);
      Var diff = tape.affine(rhat, -1.0, r->reward);  // R - R_hat_t
      sq.push_back(tape.square(diff));
    }
    Var acc = sq[0];
    for (size_t i = 1; i < sq.size(); ++i) acc = tape.add(acc, sq[i]);
    per_rollout.push_back(tape.affine(acc, 1.0 / static_cast<double>(sq.size()), 0.0));
  }
  Var acc = per_rollout[0];
  for (size_t i = 1; i < per_rollout.size(); ++i) acc = tape.add(acc, per_rollout[i]);
  Var loss = tape.affine(acc, 1.0 / static_cast<double>(per_rollout.size()), 0.0);

  const double value = tape.value(loss).at(0);
  tape.backward(loss);
  baseline.params.zero_grads();
  tape.accumulate_param_grads(baseline.params);
  baseline.params.clip_global_norm(clip);
  baseline.params.adam_step(adam);
  return value;
}

double baseline_loss_value(const BaselineModel& baseline, const RolloutRecord& rollout) {
  require(!rollout.features.empty(), "baseline_loss_value: rollout without features");
  double acc = 0.0;
  for (const Array& feat : rollout.features) {
    const double diff = rollout.reward - baseline.predict(feat);
    acc += diff * diff;
  }
  return acc / static_cast<double>(rollout.features.size());
}

Corpus filter_corpus(const Corpus& corpus, double min_score) {
  Corpus out;
  for (const auto& r : corpus) {
    require(r.sen_score.has_value(), "filter_corpus: record without sen_score");
    if (*r.sen_score > min_score) out.push_back(r);
  }
  return out;
}

}  // namespace senhead
