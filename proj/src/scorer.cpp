#include "senhead/scorer.hpp"

#include <algorithm>
#include <cmath>

namespace senhead {

namespace {
std::string conv_w_name(int width) { return "conv" + std::to_string(width) + ".w"; }
std::string conv_b_name(int width) { return "conv" + std::to_string(width) + ".b"; }

void init_params(ParamStore& p, int vocab_size, const ScorerConfig& cfg, uint64_t seed) {
  Rng rng(seed);
  p.create_uniform("emb", {vocab_size, cfg.emb_dim}, -0.1, 0.1, rng);
  for (int w : kScorerWidths) {
    p.create_uniform(conv_w_name(w), {w * cfg.emb_dim, cfg.channels}, -0.1, 0.1, rng);
    p.create(conv_b_name(w), {cfg.channels});
  }
  p.create_uniform("proj.w", {3 * cfg.channels}, -0.1, 0.1, rng);
  p.create("proj.b", {1});
}
}  // namespace

ScorerModel::ScorerModel(Vocab vocab, ScorerConfig cfg, uint64_t init_seed)
    : vocab_(std::move(vocab)), cfg_(cfg) {
  cfg_.validate();
  init_params(params_, vocab_.size(), cfg_, init_seed);
}

ScorerModel::ScorerModel(Vocab vocab, ScorerConfig cfg, ParamStore params)
    : vocab_(std::move(vocab)), cfg_(cfg), params_(std::move(params)) {
  cfg_.validate();
  require(params_.has("emb"), "ScorerModel: parameter store lacks 'emb'");
  const Array& emb = params_.value("emb");
  require(emb.rows() == vocab_.size() && emb.cols() == cfg_.emb_dim,
          "ScorerModel: embedding shape ", emb.shape_str(), " does not match config");
}

std::vector<int> ScorerModel::prepare_ids(const TokenList& headline, int* real_len) const {
  TokenList toks = headline;
  while (!toks.empty() && toks.back() == Vocab::pad_token()) toks.pop_back();
  require(!toks.empty(), "scorer: empty headline");
  std::vector<int> ids;
  ids.reserve(toks.size());
  for (const auto& t : toks) ids.push_back(vocab_.id(t));
  *real_len = static_cast<int>(ids.size());
  while (static_cast<int>(ids.size()) < kScorerMinLen) ids.push_back(Vocab::kPad);
  return ids;
}

double ScorerModel::logit(const TokenList& headline) const {
  int real_len = 0;
  std::vector<int> ids = prepare_ids(headline, &real_len);
  const int e = cfg_.emb_dim, c = cfg_.channels;
  const Array& emb = params_.value("emb");
  const Array& proj_w = params_.value("proj.w");

  double out = params_.value("proj.b").at(0);
  int bank = 0;
  for (int w : kScorerWidths) {
    const Array& cw = params_.value(conv_w_name(w));
    const Array& cb = params_.value(conv_b_name(w));
    const int valid = std::max(real_len - w + 1, 1);
    for (int ch = 0; ch < c; ++ch) {
      double best = -1e300;
      for (int t = 0; t < valid; ++t) {
        double acc = cb.at(ch);
        for (int dt = 0; dt < w; ++dt) {
          const int row = ids[static_cast<size_t>(t + dt)];
          for (int k = 0; k < e; ++k)
            acc += emb.at(row, k) * cw.at(dt * e + k, ch);
        }
        best = std::max(best, std::max(acc, 0.0));
      }
      out += proj_w.at(bank * c + ch) * best;
    }
    ++bank;
  }
  require(std::isfinite(out), "scorer: non-finite logit");
  return out;
}

double ScorerModel::score(const TokenList& headline) const {
  return 1.0 / (1.0 + std::exp(-logit(headline)));
}

Var ScorerModel::build_bce_loss(Tape& tape, const TokenList& headline, int label) {
  require(label == 0 || label == 1, "scorer: label must be 0 or 1, got ", label);
  int real_len = 0;
  std::vector<int> ids = prepare_ids(headline, &real_len);
  const int e = cfg_.emb_dim, c = cfg_.channels;
  const Array& emb = params_.value("emb");

  std::vector<Var> pooled;
  for (int w : kScorerWidths) {
    const int valid = std::max(real_len - w + 1, 1);
    // im2col over the frozen embeddings: a constant, so the table gets no grad
    Array windows = Array::zeros({valid, w * e});
    for (int t = 0; t < valid; ++t)
      for (int dt = 0; dt < w; ++dt) {
        const int row = ids[static_cast<size_t>(t + dt)];
        for (int k = 0; k < e; ++k) windows.at(t, dt * e + k) = emb.at(row, k);
      }
    Var conv = tape.relu(tape.add(
        tape.matmul(tape.input(std::move(windows)), tape.param(params_, conv_w_name(w))),
        tape.param(params_, conv_b_name(w))));
    pooled.push_back(tape.max_over_rows(conv, valid));
  }
  Var feats = tape.concat(pooled);
  Var logit_var = tape.add(tape.dot(tape.param(params_, "proj.w"), feats),
                           tape.param(params_, "proj.b"));
  return tape.bce_with_logit(logit_var, static_cast<double>(label));
}

ScorerTrainResult train_scorer(ScorerModel& model, const Corpus& train, const Corpus& val,
                               const ScorerTrainOptions& opts) {
  require(!train.empty(), "train_scorer: empty training set");
  size_t pos = 0, neg = 0;
  for (const auto& r : train) {
    require(r.label.has_value(), "train_scorer: record without label");
    (*r.label == 1 ? pos : neg) += 1;
  }
  require(pos > 0 && neg > 0, "train_scorer: single-class dataset (", pos, " positive, ",
          neg, " negative)");
  for (const auto& r : val) require(r.label.has_value(), "train_scorer: unlabeled val record");

  ScorerTrainResult result;
  ParamStore best = model.params();
  Rng shuffle_rng(Rng::mix(opts.seed, 0x5c0fful));
  int since_best = 0;

  std::vector<size_t> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < opts.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(opts.batch)) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(opts.batch));
      model.params().zero_grads();
      for (size_t k = start; k < end; ++k) {
        const CorpusRecord& r = train[order[k]];
        Tape tape;
        Var loss = model.build_bce_loss(tape, whitespace_tokenize(r.headline), *r.label);
        tape.backward(loss);
        tape.accumulate_param_grads(model.params(), 1.0 / static_cast<double>(end - start));
      }
      model.params().clip_global_norm(opts.clip);
      model.params().adam_step(opts.adam);
    }

    const double acc = val.empty() ? 0.0 : scorer_accuracy(model, val);
    result.val_accuracy_history.push_back(acc);
    result.epochs_run = epoch + 1;
    if (acc > result.best_val_accuracy || epoch == 0) {
      result.best_val_accuracy = acc;
      best = model.params();
      since_best = 0;
    } else if (++since_best >= opts.patience) {
      break;
    }
  }
  model.params() = std::move(best);
  return result;
}

double scorer_accuracy(const ScorerModel& model, const Corpus& labeled) {
  require(!labeled.empty(), "scorer_accuracy: empty set");
  size_t correct = 0;
  for (const auto& r : labeled) {
    const double s = model.score(whitespace_tokenize(r.headline));
    const int pred = s > 0.5 ? 1 : 0;
    if (pred == *r.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labeled.size());
}

ScoreSummary score_corpus(Corpus& corpus, const ScorerModel& model) {
  ScoreSummary summary;
  for (auto& r : corpus) {
    const double s = model.score(whitespace_tokenize(r.headline));
    r.sen_score = s;
    summary.mean += s;
    const int bin = std::min(9, static_cast<int>(s * 10.0));
    summary.histogram[static_cast<size_t>(bin)] += 1;
  }
  summary.count = corpus.size();
  if (summary.count > 0) summary.mean /= static_cast<double>(summary.count);
  return summary;
}

}  // namespace senhead
