#include "senhead/seq2seq.hpp"

#include <algorithm>

namespace senhead {

namespace {
void init_params(ParamStore& p, const Seq2SeqConfig& cfg, uint64_t seed) {
  Rng rng(seed);
  const int v = cfg.vocab_size, e = cfg.emb_dim, h = cfg.hidden;
  auto w = [&](const std::string& name, std::vector<int> shape) {
    p.create_uniform(name, std::move(shape), -0.1, 0.1, rng);
  };
  w("emb", {v, e});
  w("enc_fwd.w_x", {4 * h, e});
  w("enc_fwd.w_h", {4 * h, h});
  p.create("enc_fwd.b", {4 * h});
  w("enc_bwd.w_x", {4 * h, e});
  w("enc_bwd.w_h", {4 * h, h});
  p.create("enc_bwd.b", {4 * h});
  w("bridge_h.w", {h, 2 * h});
  p.create("bridge_h.b", {h});
  w("bridge_c.w", {h, 2 * h});
  p.create("bridge_c.b", {h});
  w("dec.w_x", {4 * h, e});
  w("dec.w_h", {4 * h, h});
  p.create("dec.b", {4 * h});
  // attention feature dim = H
  w("attn.w_enc", {2 * h, h});  // used as states @ w_enc
  w("attn.w_dec", {h, h});
  p.create("attn.b", {h});
  w("attn.v", {h});
  w("out.w", {h, 3 * h});  // o_t = out.w @ [s_t, h_t*] + out.b
  p.create("out.b", {h});
  w("proj.w", {v, h});  // vocab logits
  p.create("proj.b", {v});
  w("ptr.w_ctx", {2 * h});
  w("ptr.w_state", {h});
  w("ptr.w_x", {e});
  p.create("ptr.b", {1});
}
}  // namespace

Seq2SeqModel::Seq2SeqModel(Vocab vocab, Seq2SeqConfig cfg, uint64_t init_seed)
    : vocab_(std::move(vocab)), cfg_(cfg) {
  cfg_.vocab_size = vocab_.size();
  cfg_.validate();
  init_params(params_, cfg_, init_seed);
}

Seq2SeqModel::Seq2SeqModel(Vocab vocab, Seq2SeqConfig cfg, ParamStore params)
    : vocab_(std::move(vocab)), cfg_(cfg), params_(std::move(params)) {
  cfg_.vocab_size = vocab_.size();
  cfg_.validate();
  require(params_.has("emb"), "Seq2SeqModel: parameter store lacks 'emb'");
  const Array& emb = params_.value("emb");
  require(emb.rows() == cfg_.vocab_size && emb.cols() == cfg_.emb_dim,
          "Seq2SeqModel: embedding shape ", emb.shape_str(), " does not match config (",
          cfg_.vocab_size, " x ", cfg_.emb_dim, ")");
}

Var Seq2SeqModel::embed(Tape& tape, int ext_id) {
  const int id = ext_id < cfg_.vocab_size ? ext_id : Vocab::kUnk;
  require(id >= 0, "embed: negative token id ", ext_id);
  return tape.row(tape.param(params_, "emb"), id);
}

Encoded Seq2SeqModel::encode(Tape& tape, const std::vector<int>& article_ext_ids,
                             int oov_count) {
  require(!article_ext_ids.empty(), "encode: empty article");
  const int m = static_cast<int>(article_ext_ids.size());
  const int h = cfg_.hidden;

  std::vector<int> lookup_ids(article_ext_ids.size());
  for (size_t i = 0; i < article_ext_ids.size(); ++i)
    lookup_ids[i] =
        article_ext_ids[i] < cfg_.vocab_size ? article_ext_ids[i] : Vocab::kUnk;
  Var emb_rows = tape.gather_rows(tape.param(params_, "emb"), lookup_ids);

  Var fx = tape.param(params_, "enc_fwd.w_x");
  Var fh = tape.param(params_, "enc_fwd.w_h");
  Var fb = tape.param(params_, "enc_fwd.b");
  Var bx = tape.param(params_, "enc_bwd.w_x");
  Var bh = tape.param(params_, "enc_bwd.w_h");
  Var bb = tape.param(params_, "enc_bwd.b");

  Tape::LstmState fwd{tape.input(Array::zeros({h})), tape.input(Array::zeros({h}))};
  Tape::LstmState bwd{tape.input(Array::zeros({h})), tape.input(Array::zeros({h}))};
  std::vector<Tape::LstmState> fwd_states;
  std::vector<Tape::LstmState> bwd_states(static_cast<size_t>(m));
  fwd_states.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    fwd = tape.lstm_step(tape.row(emb_rows, i), fwd, fx, fh, fb);
    fwd_states.push_back(fwd);
  }
  for (int i = m - 1; i >= 0; --i) {
    bwd = tape.lstm_step(tape.row(emb_rows, i), bwd, bx, bh, bb);
    bwd_states[static_cast<size_t>(i)] = bwd;
  }

  std::vector<Var> rows;
  rows.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const Var parts[] = {fwd_states[static_cast<size_t>(i)].h,
                         bwd_states[static_cast<size_t>(i)].h};
    rows.push_back(tape.concat(parts));
  }

  Encoded enc;
  enc.states = tape.stack_rows(rows);
  enc.attn_proj = tape.matmul(enc.states, tape.param(params_, "attn.w_enc"));
  const Var final_h[] = {fwd_states.back().h, bwd_states.front().h};
  const Var final_c[] = {fwd_states.back().c, bwd_states.front().c};
  enc.dec_init.h = tape.tanh_op(tape.add(
      tape.matmul(tape.param(params_, "bridge_h.w"), tape.concat(final_h)),
      tape.param(params_, "bridge_h.b")));
  enc.dec_init.c = tape.tanh_op(tape.add(
      tape.matmul(tape.param(params_, "bridge_c.w"), tape.concat(final_c)),
      tape.param(params_, "bridge_c.b")));
  enc.article_ext_ids = article_ext_ids;
  enc.oov_count = oov_count;
  return enc;
}

Var extend_distribution(Tape& tape, Var p_voc, Var p_gen, Var attention,
                        const std::vector<int>& article_ext_ids, int total_size) {
  Var gen_part = tape.pad_to(tape.mul(p_voc, p_gen), total_size);
  Var copy_part = tape.mul(attention, tape.one_minus(p_gen));
  return tape.scatter_add(gen_part, article_ext_ids, copy_part);
}

DecoderStep Seq2SeqModel::decode_step(Tape& tape, const Encoded& enc,
                                      const Tape::LstmState& prev, int input_ext_id) {
  DecoderStep step;
  Var x = embed(tape, input_ext_id);
  step.state = tape.lstm_step(x, prev, tape.param(params_, "dec.w_x"),
                              tape.param(params_, "dec.w_h"), tape.param(params_, "dec.b"));
  Var s = step.state.h;

  // e_i = v . tanh(W_enc h_i + W_dec s + b), a = softmax(e)
  Var dec_part = tape.add(tape.matmul(tape.param(params_, "attn.w_dec"), s),
                          tape.param(params_, "attn.b"));
  Var scores = tape.matmul(tape.tanh_op(tape.add(enc.attn_proj, dec_part)),
                           tape.param(params_, "attn.v"));
  step.attention = tape.softmax(scores);
  step.context = tape.matmul_tv(enc.states, step.attention);

  const Var feat_in[] = {s, step.context};
  step.features = tape.add(tape.matmul(tape.param(params_, "out.w"), tape.concat(feat_in)),
                           tape.param(params_, "out.b"));
  step.p_voc = tape.softmax(tape.add(
      tape.matmul(tape.param(params_, "proj.w"), step.features),
      tape.param(params_, "proj.b")));

  Var gate = tape.add(
      tape.add(tape.dot(tape.param(params_, "ptr.w_ctx"), step.context),
               tape.dot(tape.param(params_, "ptr.w_state"), s)),
      tape.add(tape.dot(tape.param(params_, "ptr.w_x"), x), tape.param(params_, "ptr.b")));
  step.p_gen = tape.sigmoid(gate);

  step.dist = extend_distribution(tape, step.p_voc, step.p_gen, step.attention,
                                  enc.article_ext_ids, cfg_.vocab_size + enc.oov_count);
  return step;
}

TeacherForced Seq2SeqModel::force_sequence(Tape& tape, const Encoded& enc,
                                           const std::vector<int>& emitted_ids,
                                           int min_len) {
  require(!emitted_ids.empty(), "force_sequence: empty sequence");
  TeacherForced out;
  Tape::LstmState state = enc.dec_init;
  int input = Vocab::kStart;
  for (size_t t = 0; t < emitted_ids.size(); ++t) {
    DecoderStep step = decode_step(tape, enc, state, input);
    state = step.state;
    const int target = emitted_ids[t];
    Var logp;
    if (static_cast<int>(t) < min_len) {
      require(target != Vocab::kStop, "force_sequence: STOP emitted below min_len");
      logp = tape.sub(tape.log_op(tape.pick(step.dist, target)),
                      tape.log_op(tape.one_minus(tape.pick(step.dist, Vocab::kStop))));
    } else {
      logp = tape.log_op(tape.pick(step.dist, target));
    }
    out.logps.push_back(logp);
    out.features.push_back(step.features);
    input = target < cfg_.vocab_size ? target : Vocab::kUnk;
  }
  return out;
}

TeacherForced Seq2SeqModel::sequence_logprob(Tape& tape, const Encoded& enc,
                                             const std::vector<int>& headline_input,
                                             const std::vector<int>& headline_target) {
  require(headline_input.size() == headline_target.size(),
          "sequence_logprob: input/target length mismatch");
  // Feeding the input side is identical to feeding UNK-clamped targets, so
  // teacher forcing is a forced replay of target + STOP.
  for (size_t t = 0; t < headline_input.size(); ++t) {
    const int clamped =
        headline_target[t] < cfg_.vocab_size ? headline_target[t] : Vocab::kUnk;
    require(headline_input[t] == clamped, "sequence_logprob: input id ",
            headline_input[t], " at step ", t, " does not match target ",
            headline_target[t]);
  }
  std::vector<int> targets = headline_target;
  targets.push_back(Vocab::kStop);
  return force_sequence(tape, enc, targets, 0);
}

SampledSequence Seq2SeqModel::sample_sequence(Tape& tape, const Encoded& enc,
                                              const SampleOptions& opts, Rng& rng) {
  require(opts.max_len >= 1, "sample_sequence: max_len must be >= 1");
  require(opts.min_len <= opts.max_len, "sample_sequence: min_len ", opts.min_len,
          " exceeds max_len ", opts.max_len);
  SampledSequence out;
  Tape::LstmState state = enc.dec_init;
  int input = Vocab::kStart;
  for (int t = 0; t < opts.max_len; ++t) {
    DecoderStep step = decode_step(tape, enc, state, input);
    state = step.state;
    const Array& p = tape.value(step.dist);
    int drawn;
    Var logp;
    if (t < opts.min_len) {
      // STOP masked out; renormalize both the draw and the log probability
      std::vector<double> weights = p.data;
      weights[Vocab::kStop] = 0.0;
      drawn = rng.categorical(weights);
      logp = tape.sub(tape.log_op(tape.pick(step.dist, drawn)),
                      tape.log_op(tape.one_minus(tape.pick(step.dist, Vocab::kStop))));
    } else {
      drawn = rng.categorical(p.data);
      logp = tape.log_op(tape.pick(step.dist, drawn));
    }
    out.ids.push_back(drawn);
    out.logps.push_back(logp);
    out.features.push_back(step.features);
    if (drawn == Vocab::kStop) {
      out.finished = true;
      break;
    }
    input = drawn;
  }
  return out;
}

bool better_hypothesis(const Hypothesis& a, const Hypothesis& b) {
  if (a.score() != b.score()) return a.score() > b.score();
  if (a.ids.size() != b.ids.size()) return a.ids.size() < b.ids.size();
  return a.ids < b.ids;
}

Hypothesis Seq2SeqModel::beam_search(Tape& tape, const Encoded& enc, int beam,
                                     int max_len, int min_len) {
  require(beam >= 1, "beam_search: beam must be >= 1, got ", beam);
  require(max_len >= 1, "beam_search: max_len must be >= 1");

  struct Live {
    Hypothesis hyp;
    Tape::LstmState state;
    int input = Vocab::kStart;
  };
  std::vector<Live> live(1);
  live[0].state = enc.dec_init;
  std::vector<Hypothesis> finished;

  for (int t = 0; t < max_len && !live.empty(); ++t) {
    struct Cand {
      double logprob;
      size_t parent;
      int token;
    };
    std::vector<Cand> cands;
    std::vector<Tape::LstmState> states(live.size());
    for (size_t i = 0; i < live.size(); ++i) {
      DecoderStep step = decode_step(tape, enc, live[i].state, live[i].input);
      states[i] = step.state;
      const Array& p = tape.value(step.dist);
      for (int w = 0; w < p.numel(); ++w) {
        if (w == Vocab::kStop && t < min_len) continue;
        cands.push_back({live[i].hyp.logprob + std::log(p.at(w)), i, w});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.logprob != b.logprob) return a.logprob > b.logprob;
      if (a.parent != b.parent) return a.parent < b.parent;
      return a.token < b.token;
    });

    std::vector<Live> next;
    for (const Cand& c : cands) {
      if (static_cast<int>(next.size()) >= beam) break;
      Hypothesis h = live[c.parent].hyp;
      h.ids.push_back(c.token);
      h.logprob = c.logprob;
      if (c.token == Vocab::kStop) {
        h.finished = true;
        finished.push_back(std::move(h));
        continue;
      }
      Live l;
      l.hyp = std::move(h);
      l.state = states[c.parent];
      l.input = c.token < cfg_.vocab_size ? c.token : Vocab::kUnk;
      next.push_back(std::move(l));
    }
    live = std::move(next);
  }

  if (!finished.empty()) {
    return *std::min_element(finished.begin(), finished.end(),
                             [](const Hypothesis& a, const Hypothesis& b) {
                               return better_hypothesis(a, b);
                             });
  }
  require(!live.empty(), "beam_search: no hypotheses");
  Hypothesis best = live[0].hyp;
  for (size_t i = 1; i < live.size(); ++i)
    if (better_hypothesis(live[i].hyp, best)) best = live[i].hyp;
  best.finished = false;
  return best;
}

TokenList Seq2SeqModel::decode_tokens(const TokenList& article, int beam, int max_len) {
  ExtendedExample ex = extend_with_oovs(article, {Vocab::stop_token()}, vocab_);
  Tape tape;
  Encoded enc = encode(tape, ex.article_ids, static_cast<int>(ex.article_oovs.size()));
  Hypothesis hyp = beam_search(tape, enc, beam, max_len);
  return render_surface(hyp.ids, vocab_, ex.article_oovs);
}

}  // namespace senhead
