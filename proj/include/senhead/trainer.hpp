#pragma once

#include <array>
#include <optional>

#include "senhead/dataset.hpp"
#include "senhead/objectives.hpp"

namespace senhead {

enum class TrainMode { PointerGen, Pos, SameFt, PosFt, RlRouge, RlSen, ArlSen };

TrainMode mode_from_string(const std::string& s);
std::string mode_to_string(TrainMode mode);

struct RunConfig {
  TrainMode mode = TrainMode::PointerGen;
  std::string train_path;
  std::string val_path;
  std::string scorer_checkpoint;  // dir; required for score-dependent modes
  std::string init_checkpoint;    // dir; required for fine-tune modes
  std::string out_dir;

  int batch = 128;
  double lr = 1e-4;
  double baseline_lr = 1e-3;
  double clip = 2.0;
  int hidden = 512;
  int emb = 350;
  int vocab_cap = Vocab::kDefaultCap;
  int beam = 5;
  double lambda_mix = -1.0;      // < 0: per-mode default (0.95 rouge, 0.5 sen)
  double min_sen_filter = -1.0;  // < 0: per-mode default (0.1 / 0.5)
  uint64_t seed = 1;
  int patience = 3;
  int max_epochs = 1000;
  int max_article_tokens = 128;
  int max_headline_tokens = 32;
  int val_slice = 200;
  int max_decode_len = 35;
  int threads = 0;  // 0 = hardware concurrency

  bool needs_rollouts() const {
    return mode == TrainMode::RlRouge || mode == TrainMode::RlSen ||
           mode == TrainMode::ArlSen;
  }
  bool needs_scores() const {
    return mode == TrainMode::Pos || mode == TrainMode::SameFt ||
           mode == TrainMode::PosFt || mode == TrainMode::RlSen ||
           mode == TrainMode::ArlSen;
  }
  bool sen_validation() const {
    return mode == TrainMode::RlSen || mode == TrainMode::ArlSen;
  }
  bool needs_init() const {
    return mode == TrainMode::SameFt || mode == TrainMode::PosFt;
  }
  bool needs_scorer() const {
    return mode == TrainMode::RlSen || mode == TrainMode::ArlSen;
  }
  double effective_lambda() const;
  double effective_min_filter() const;  // < 0 when the mode does not filter
  void validate() const;
};

RunConfig run_config_from_json(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& cfg);

struct TrainState {
  int epoch = 0;  // completed epochs
  long long step = 0;
  double best_metric = -1e300;
  int evals_since_best = 0;
};

struct CheckpointData {
  Vocab vocab;
  Seq2SeqConfig config;
  ParamStore params;
  std::optional<BaselineModel> baseline;
  TrainState state;
  uint64_t seed = 0;
};

void save_checkpoint(const std::string& dir, const Seq2SeqModel& model,
                     const BaselineModel* baseline, const TrainState& state,
                     uint64_t seed);
CheckpointData load_checkpoint(const std::string& dir);

struct StepLog {
  int epoch = 0;
  long long step = 0;
  double loss = 0.0;
  double mle_part = 0.0;
  double rl_part = 0.0;
  double l_b = 0.0;
  double mean_reward = 0.0;
  double mean_weight = 1.0;
};

struct TrainResult {
  std::string best_dir;
  std::string last_dir;
  double best_metric = 0.0;
  int epochs_run = 0;
  std::vector<double> val_metrics;
  std::vector<StepLog> steps;
  size_t empty_rollout_warnings = 0;
};

// Full training run with per-epoch validation, patience-based early stopping
// and best/last checkpoints under cfg.out_dir. With resume=true the run
// continues from out_dir/last and reproduces the uninterrupted stream
// bit for bit (the per-epoch RNG streams derive statelessly from the seed).
TrainResult train(const RunConfig& cfg, bool resume = false);

// Beam decode of a corpus: one {article, headline} line per input line.
void generate_file(const std::string& checkpoint_dir, const std::string& corpus_path,
                   const std::string& out_path, int beam, int max_decode_len,
                   int max_article_tokens = 128);

struct EvalReport {
  CorpusRouge rouge;
  size_t count = 0;
  bool has_sen = false;
  double mean_sen = 0.0;
  std::array<size_t, 10> sen_histogram{};
};

EvalReport evaluate_files(const std::string& generated_path,
                          const std::string& references_path,
                          const std::string& scorer_dir);
std::string eval_report_to_json(const EvalReport& report);
std::string eval_report_pretty(const EvalReport& report);

// Mean score over the corpus under the scorer: exactly the expected fraction
// of MLE training a sample receives under the auto-tuned loss.
double expected_mle_fraction(const Corpus& corpus, const ScorerModel& scorer);

// Scorer checkpoints share the container format plus a vocab + meta sidecar.
void save_scorer(const std::string& dir, const ScorerModel& model);
ScorerModel load_scorer(const std::string& dir);

void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace senhead
