#pragma once

#include "senhead/tape.hpp"
#include "senhead/text.hpp"

namespace senhead {

struct Seq2SeqConfig {
  int vocab_size = 0;
  int emb_dim = 350;
  int hidden = 512;

  void validate() const {
    require(vocab_size > 4, "Seq2SeqConfig: vocab_size must exceed the reserved ids");
    require(emb_dim > 0 && hidden > 0, "Seq2SeqConfig: emb/hidden must be positive");
  }
};

// Encoder output plus everything a decode step needs to attend and copy.
struct Encoded {
  Var states;     // [M, 2H]
  Var attn_proj;  // [M, H], encoder side of the attention score, cached
  Tape::LstmState dec_init;
  std::vector<int> article_ext_ids;
  int oov_count = 0;
};

struct DecoderStep {
  Tape::LstmState state;
  Var attention;  // [M], sums to 1
  Var context;    // [2H]
  Var features;   // [H], the pre-logit feature (also the baseline input)
  Var p_voc;      // [V]
  Var p_gen;      // [1]
  Var dist;       // [V + oov_count]
};

struct SampleOptions {
  int max_len = 32;
  int min_len = 0;  // STOP masked (and the distribution renormalized) below this
};

struct SampledSequence {
  std::vector<int> ids;       // extended ids, includes STOP when finished
  std::vector<Var> logps;     // log probability of each drawn token
  std::vector<Var> features;  // o_t per step
  bool finished = false;
};

struct TeacherForced {
  std::vector<Var> logps;     // log P(y_t*), targets = headline + STOP
  std::vector<Var> features;  // o_t per step
};

struct Hypothesis {
  std::vector<int> ids;  // emitted tokens (extended ids), STOP last when finished
  double logprob = 0.0;  // cumulative
  bool finished = false;

  double score() const {
    return ids.empty() ? -1e300 : logprob / static_cast<double>(ids.size());
  }
};

// Bi-LSTM encoder, LSTM decoder with concat attention, generation/copy
// mixture gated by p_gen, beam-search decoding. All steps run on a caller
// tape so training and decoding share one code path.
class Seq2SeqModel {
 public:
  Seq2SeqModel(Vocab vocab, Seq2SeqConfig cfg, uint64_t init_seed);
  Seq2SeqModel(Vocab vocab, Seq2SeqConfig cfg, ParamStore params);

  const Vocab& vocab() const { return vocab_; }
  const Seq2SeqConfig& config() const { return cfg_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  Encoded encode(Tape& tape, const std::vector<int>& article_ext_ids, int oov_count);
  DecoderStep decode_step(Tape& tape, const Encoded& enc, const Tape::LstmState& prev,
                          int input_ext_id);

  TeacherForced sequence_logprob(Tape& tape, const Encoded& enc,
                                 const std::vector<int>& headline_input,
                                 const std::vector<int>& headline_target);

  // Log-probabilities of an already-chosen emission sequence (deterministic
  // replay of a rollout). Produces the same values the sampling path did for
  // the same ids, which makes REINFORCE losses checkable by finite
  // differences.
  TeacherForced force_sequence(Tape& tape, const Encoded& enc,
                               const std::vector<int>& emitted_ids, int min_len = 0);

  SampledSequence sample_sequence(Tape& tape, const Encoded& enc,
                                  const SampleOptions& opts, Rng& rng);

  Hypothesis beam_search(Tape& tape, const Encoded& enc, int beam, int max_len,
                         int min_len = 0);

  // Convenience: encode + beam on a fresh tape, returning surface tokens.
  TokenList decode_tokens(const TokenList& article, int beam, int max_len);

 private:
  Var embed(Tape& tape, int ext_id);

  Vocab vocab_;
  Seq2SeqConfig cfg_;
  ParamStore params_;
};

// The generation/copy mixture (the final-distribution composition), exposed
// on its own so the copy arithmetic can be pinned down in isolation.
Var extend_distribution(Tape& tape, Var p_voc, Var p_gen, Var attention,
                        const std::vector<int>& article_ext_ids, int total_size);

bool better_hypothesis(const Hypothesis& a, const Hypothesis& b);

}  // namespace senhead
