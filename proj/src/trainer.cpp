#include "senhead/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "json.hpp"

namespace senhead {

namespace fs = std::filesystem;
using json = nlohmann::json;

TrainMode mode_from_string(const std::string& s) {
  if (s == "pointer_gen") return TrainMode::PointerGen;
  if (s == "pos") return TrainMode::Pos;
  if (s == "same_ft") return TrainMode::SameFt;
  if (s == "pos_ft") return TrainMode::PosFt;
  if (s == "rl_rouge") return TrainMode::RlRouge;
  if (s == "rl_sen") return TrainMode::RlSen;
  if (s == "arl_sen") return TrainMode::ArlSen;
  fail("unknown training mode '", s,
       "' (expected pointer_gen|pos|same_ft|pos_ft|rl_rouge|rl_sen|arl_sen)");
}

std::string mode_to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::PointerGen: return "pointer_gen";
    case TrainMode::Pos: return "pos";
    case TrainMode::SameFt: return "same_ft";
    case TrainMode::PosFt: return "pos_ft";
    case TrainMode::RlRouge: return "rl_rouge";
    case TrainMode::RlSen: return "rl_sen";
    case TrainMode::ArlSen: return "arl_sen";
  }
  fail("mode_to_string: bad mode");
}

double RunConfig::effective_lambda() const {
  if (lambda_mix >= 0.0) return lambda_mix;
  if (mode == TrainMode::RlRouge) return 0.95;
  if (mode == TrainMode::RlSen) return 0.5;
  return 0.0;
}

double RunConfig::effective_min_filter() const {
  if (min_sen_filter >= 0.0) return min_sen_filter;
  switch (mode) {
    case TrainMode::Pos:
    case TrainMode::PosFt: return 0.5;
    case TrainMode::SameFt:
    case TrainMode::RlSen:
    case TrainMode::ArlSen: return 0.1;
    default: return -1.0;
  }
}

void RunConfig::validate() const {
  require(!train_path.empty(), "config: train_path is required");
  require(!val_path.empty(), "config: val_path is required");
  require(!out_dir.empty(), "config: out_dir is required");
  require(batch > 0 && hidden > 0 && emb > 0 && vocab_cap > 0 && beam > 0,
          "config: batch/hidden/emb/vocab_cap/beam must be positive");
  require(lr > 0.0 && baseline_lr > 0.0 && clip > 0.0,
          "config: lr/baseline_lr/clip must be positive");
  require(patience > 0 && max_epochs > 0, "config: patience/max_epochs must be positive");
  require(max_decode_len > 0 && val_slice > 0,
          "config: max_decode_len/val_slice must be positive");
  if (lambda_mix >= 0.0)
    require(lambda_mix <= 1.0, "config: lambda ", lambda_mix, " outside [0,1]");
  if (needs_init())
    require(!init_checkpoint.empty(), "config: mode ", mode_to_string(mode),
            " requires init_checkpoint");
  if (needs_scorer())
    require(!scorer_checkpoint.empty(), "config: mode ", mode_to_string(mode),
            " requires scorer_checkpoint");
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail("config: invalid JSON: ", e.what());
  }
  require(j.is_object(), "config: expected a JSON object");
  RunConfig cfg;
  for (const auto& [key, val] : j.items()) {
    if (key == "mode") cfg.mode = mode_from_string(val.get<std::string>());
    else if (key == "train_path") cfg.train_path = val.get<std::string>();
    else if (key == "val_path") cfg.val_path = val.get<std::string>();
    else if (key == "scorer_checkpoint") cfg.scorer_checkpoint = val.get<std::string>();
    else if (key == "init_checkpoint") cfg.init_checkpoint = val.get<std::string>();
    else if (key == "out_dir") cfg.out_dir = val.get<std::string>();
    else if (key == "batch") cfg.batch = val.get<int>();
    else if (key == "lr") cfg.lr = val.get<double>();
    else if (key == "baseline_lr") cfg.baseline_lr = val.get<double>();
    else if (key == "clip") cfg.clip = val.get<double>();
    else if (key == "hidden") cfg.hidden = val.get<int>();
    else if (key == "emb") cfg.emb = val.get<int>();
    else if (key == "vocab_cap") cfg.vocab_cap = val.get<int>();
    else if (key == "beam") cfg.beam = val.get<int>();
    else if (key == "lambda") cfg.lambda_mix = val.get<double>();
    else if (key == "min_sen_filter") cfg.min_sen_filter = val.get<double>();
    else if (key == "seed") cfg.seed = val.get<uint64_t>();
    else if (key == "patience") cfg.patience = val.get<int>();
    else if (key == "max_epochs") cfg.max_epochs = val.get<int>();
    else if (key == "max_article_tokens") cfg.max_article_tokens = val.get<int>();
    else if (key == "max_headline_tokens") cfg.max_headline_tokens = val.get<int>();
    else if (key == "val_slice") cfg.val_slice = val.get<int>();
    else if (key == "max_decode_len") cfg.max_decode_len = val.get<int>();
    else if (key == "threads") cfg.threads = val.get<int>();
    else fail("config: unknown key '", key, "'");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path);
  require(is.good(), "config: cannot open '", path, "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return run_config_from_json(buf.str());
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["mode"] = mode_to_string(cfg.mode);
  j["train_path"] = cfg.train_path;
  j["val_path"] = cfg.val_path;
  if (!cfg.scorer_checkpoint.empty()) j["scorer_checkpoint"] = cfg.scorer_checkpoint;
  if (!cfg.init_checkpoint.empty()) j["init_checkpoint"] = cfg.init_checkpoint;
  j["out_dir"] = cfg.out_dir;
  j["batch"] = cfg.batch;
  j["lr"] = cfg.lr;
  j["baseline_lr"] = cfg.baseline_lr;
  j["clip"] = cfg.clip;
  j["hidden"] = cfg.hidden;
  j["emb"] = cfg.emb;
  j["vocab_cap"] = cfg.vocab_cap;
  j["beam"] = cfg.beam;
  j["lambda"] = cfg.lambda_mix;
  j["min_sen_filter"] = cfg.min_sen_filter;
  j["seed"] = cfg.seed;
  j["patience"] = cfg.patience;
  j["max_epochs"] = cfg.max_epochs;
  j["max_article_tokens"] = cfg.max_article_tokens;
  j["max_headline_tokens"] = cfg.max_headline_tokens;
  j["val_slice"] = cfg.val_slice;
  j["max_decode_len"] = cfg.max_decode_len;
  j["threads"] = cfg.threads;
  return j.dump(2);
}

// --------------------------------------------------------------- checkpoints

namespace {
std::string hash_hex(uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}
}  // namespace

void save_checkpoint(const std::string& dir, const Seq2SeqModel& model,
                     const BaselineModel* baseline, const TrainState& state,
                     uint64_t seed) {
  fs::create_directories(dir);
  model.params().save(dir + "/params.bin");
  model.vocab().save(dir + "/vocab.txt");
  if (baseline) baseline->params.save(dir + "/baseline.bin");
  json meta;
  meta["format"] = 1;
  meta["emb"] = model.config().emb_dim;
  meta["hidden"] = model.config().hidden;
  meta["vocab_size"] = model.vocab().size();
  meta["vocab_hash"] = hash_hex(model.vocab().hash());
  meta["seed"] = seed;
  meta["epoch"] = state.epoch;
  meta["step"] = state.step;
  meta["best_metric"] = state.best_metric;
  meta["evals_since_best"] = state.evals_since_best;
  std::ofstream os(dir + "/meta.json");
  require(os.good(), "save_checkpoint: cannot write meta in '", dir, "'");
  os << meta.dump(2) << "\n";
}

CheckpointData load_checkpoint(const std::string& dir) {
  require(fs::exists(dir + "/meta.json"), "checkpoint: '", dir,
          "' missing meta.json (untrained or wrong path)");
  std::ifstream is(dir + "/meta.json");
  require(is.good(), "checkpoint: cannot read '", dir, "/meta.json'");
  json meta;
  try {
    is >> meta;
  } catch (const json::exception& e) {
    fail("checkpoint: invalid meta.json in '", dir, "': ", e.what());
  }
  CheckpointData data;
  data.vocab = Vocab::load(dir + "/vocab.txt");
  const std::string expect = meta.at("vocab_hash").get<std::string>();
  const std::string got = hash_hex(data.vocab.hash());
  require(expect == got, "checkpoint: vocab mismatch in '", dir, "' (meta ", expect,
          " vs file ", got, ")");
  data.config.vocab_size = data.vocab.size();
  data.config.emb_dim = meta.at("emb").get<int>();
  data.config.hidden = meta.at("hidden").get<int>();
  data.params = ParamStore::load(dir + "/params.bin");
  if (fs::exists(dir + "/baseline.bin")) {
    BaselineModel b;
    b.params = ParamStore::load(dir + "/baseline.bin");
    data.baseline = std::move(b);
  }
  data.state.epoch = meta.at("epoch").get<int>();
  data.state.step = meta.at("step").get<long long>();
  data.state.best_metric = meta.at("best_metric").get<double>();
  data.state.evals_since_best = meta.at("evals_since_best").get<int>();
  data.seed = meta.at("seed").get<uint64_t>();
  return data;
}

void save_scorer(const std::string& dir, const ScorerModel& model) {
  fs::create_directories(dir);
  model.params().save(dir + "/params.bin");
  model.vocab().save(dir + "/vocab.txt");
  json meta;
  meta["format"] = 1;
  meta["kind"] = "scorer";
  meta["emb"] = model.config().emb_dim;
  meta["channels"] = model.config().channels;
  meta["vocab_hash"] = hash_hex(model.vocab().hash());
  std::ofstream os(dir + "/meta.json");
  require(os.good(), "save_scorer: cannot write meta in '", dir, "'");
  os << meta.dump(2) << "\n";
}

ScorerModel load_scorer(const std::string& dir) {
  require(fs::exists(dir + "/meta.json"), "scorer checkpoint: '", dir,
          "' missing meta.json (untrained or wrong path)");
  std::ifstream is(dir + "/meta.json");
  json meta;
  try {
    is >> meta;
  } catch (const json::exception& e) {
    fail("scorer checkpoint: invalid meta.json in '", dir, "': ", e.what());
  }
  require(meta.value("kind", "") == "scorer", "scorer checkpoint: '", dir,
          "' is not a scorer checkpoint");
  Vocab vocab = Vocab::load(dir + "/vocab.txt");
  require(hash_hex(vocab.hash()) == meta.at("vocab_hash").get<std::string>(),
          "scorer checkpoint: vocab mismatch in '", dir, "'");
  ScorerConfig cfg;
  cfg.emb_dim = meta.at("emb").get<int>();
  cfg.channels = meta.at("channels").get<int>();
  return ScorerModel(std::move(vocab), cfg, ParamStore::load(dir + "/params.bin"));
}

// ------------------------------------------------------------- parallel_for

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  threads = std::min(threads, n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += threads) fn(i);
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ------------------------------------------------------------------ training

namespace {

struct PreparedExample {
  ExtendedExample ex;
  double sen_score = -1.0;
};

std::vector<PreparedExample> prepare_examples(const Corpus& corpus, const Vocab& vocab) {
  std::vector<PreparedExample> out(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    const TokenList article = whitespace_tokenize(corpus[i].article);
    const TokenList headline = whitespace_tokenize(corpus[i].headline);
    require(!article.empty(), "record ", i + 1, ": empty article after tokenization");
    require(!headline.empty(), "record ", i + 1, ": empty headline after tokenization");
    out[i].ex = extend_with_oovs(article, headline, vocab);
    if (corpus[i].sen_score) out[i].sen_score = *corpus[i].sen_score;
  }
  return out;
}

std::vector<TokenList> greedy_decode_slice(Seq2SeqModel& model,
                                           const std::vector<PreparedExample>& slice,
                                           int max_decode_len, int threads) {
  std::vector<TokenList> out(slice.size());
  parallel_for(static_cast<int>(slice.size()), threads, [&](int i) {
    const auto& p = slice[static_cast<size_t>(i)];
    Tape tape;
    Encoded enc =
        model.encode(tape, p.ex.article_ids, static_cast<int>(p.ex.article_oovs.size()));
    Hypothesis hyp = model.beam_search(tape, enc, 1, max_decode_len);
    out[static_cast<size_t>(i)] = render_surface(hyp.ids, model.vocab(), p.ex.article_oovs);
  });
  return out;
}

uint64_t child_seed(uint64_t seed, int epoch, int position) {
  return Rng::mix(Rng::mix(seed, 0xc41dULL),
                  (static_cast<uint64_t>(epoch) << 32) | static_cast<uint64_t>(position));
}

struct ExampleResult {
  Tape tape;
  LossParts parts;
  size_t empty_warnings = 0;
};

}  // namespace

TrainResult train(const RunConfig& cfg_in, bool resume) {
  RunConfig cfg = cfg_in;
  cfg.validate();
  fs::create_directories(cfg.out_dir);

  LoadOptions load_opts;
  load_opts.max_article_tokens = cfg.max_article_tokens;
  load_opts.max_headline_tokens = cfg.max_headline_tokens;
  Corpus train_corpus = load_corpus(cfg.train_path, load_opts);
  Corpus val_corpus = load_corpus(cfg.val_path, load_opts);
  require(!train_corpus.empty(), "train: empty training corpus");
  require(!val_corpus.empty(), "train: empty validation corpus");

  std::optional<ScorerModel> scorer;
  if (!cfg.scorer_checkpoint.empty()) scorer = load_scorer(cfg.scorer_checkpoint);

  if (cfg.needs_scores()) {
    bool missing = false;
    for (const auto& r : train_corpus)
      if (!r.sen_score) {
        missing = true;
        break;
      }
    if (missing) {
      require(scorer.has_value(), "train: mode ", mode_to_string(cfg.mode),
              " needs sen_score annotations or a scorer_checkpoint to compute them");
      score_corpus(train_corpus, *scorer);
    }
  }

  const double min_filter = cfg.effective_min_filter();
  if (min_filter >= 0.0) {
    train_corpus = filter_corpus(train_corpus, min_filter);
    require(!train_corpus.empty(), "train: score filter > ", min_filter,
            " left no training records");
  }

  std::optional<Seq2SeqModel> model;
  std::optional<BaselineModel> baseline;
  TrainState state;
  if (resume) {
    CheckpointData data = load_checkpoint(cfg.out_dir + "/last");
    model.emplace(std::move(data.vocab), data.config, std::move(data.params));
    baseline = std::move(data.baseline);
    state = data.state;
  } else if (!cfg.init_checkpoint.empty()) {
    CheckpointData data = load_checkpoint(cfg.init_checkpoint);
    model.emplace(std::move(data.vocab), data.config, std::move(data.params));
    baseline = std::move(data.baseline);
  } else {
    require(!cfg.needs_init(), "train: mode ", mode_to_string(cfg.mode),
            " requires init_checkpoint");
    std::vector<TokenList> all_tokens;
    all_tokens.reserve(train_corpus.size() * 2);
    for (const auto& r : train_corpus) {
      all_tokens.push_back(whitespace_tokenize(r.article));
      all_tokens.push_back(whitespace_tokenize(r.headline));
    }
    Vocab vocab = Vocab::build(all_tokens, cfg.vocab_cap);
    Seq2SeqConfig mcfg;
    mcfg.vocab_size = vocab.size();
    mcfg.emb_dim = cfg.emb;
    mcfg.hidden = cfg.hidden;
    model.emplace(std::move(vocab), mcfg, Rng::mix(cfg.seed, 0x1417ULL));
  }
  if (cfg.needs_rollouts() && !baseline)
    baseline = BaselineModel::init(model->config().hidden, Rng::mix(cfg.seed, 0xba5eULL));

  std::vector<PreparedExample> examples = prepare_examples(train_corpus, model->vocab());
  std::vector<PreparedExample> val_examples = prepare_examples(val_corpus, model->vocab());
  const size_t slice_n = std::min(val_examples.size(), static_cast<size_t>(cfg.val_slice));
  std::vector<PreparedExample> val_slice(val_examples.begin(),
                                         val_examples.begin() + static_cast<long>(slice_n));
  std::vector<TokenList> val_refs;
  for (size_t i = 0; i < slice_n; ++i)
    val_refs.push_back(whitespace_tokenize(val_corpus[i].headline));

  if (cfg.sen_validation())
    require(scorer.has_value(), "train: sensationalism validation needs a scorer");
  if (cfg.mode == TrainMode::ArlSen)
    for (const auto& p : examples)
      require(p.sen_score >= 0.0, "train: arl_sen requires sen_score on every record");

  const AdamConfig gen_adam{.lr = cfg.lr};
  const AdamConfig baseline_adam{.lr = cfg.baseline_lr};
  const RewardKind reward_kind =
      cfg.mode == TrainMode::RlRouge ? RewardKind::RougeL : RewardKind::Sensationalism;
  const double lambda = cfg.effective_lambda();
  SampleOptions sample_opts;
  sample_opts.max_len = cfg.max_decode_len;
  const ScorerModel* scorer_ptr = scorer ? &*scorer : nullptr;

  std::ofstream metrics(cfg.out_dir + "/metrics.jsonl", std::ios::app);
  require(metrics.good(), "train: cannot open metrics log in '", cfg.out_dir, "'");

  TrainResult result;
  result.best_dir = cfg.out_dir + "/best";
  result.last_dir = cfg.out_dir + "/last";

  std::vector<size_t> order(examples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  const auto run_start = std::chrono::steady_clock::now();
  for (int epoch = state.epoch; epoch < cfg.max_epochs; ++epoch) {
    Rng shuffle_rng(Rng::mix(cfg.seed, Rng::mix(0x5affULL, static_cast<uint64_t>(epoch))));
    shuffle_rng.shuffle(order);

    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg.batch)) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(cfg.batch));
      const int b = static_cast<int>(end - start);
      std::vector<ExampleResult> results(static_cast<size_t>(b));

      parallel_for(b, cfg.threads, [&](int k) {
        const PreparedExample& p = examples[order[start + static_cast<size_t>(k)]];
        ExampleResult& res = results[static_cast<size_t>(k)];
        Rng rng(child_seed(cfg.seed, epoch, static_cast<int>(start) + k));
        Encoded enc = model->encode(res.tape, p.ex.article_ids,
                                    static_cast<int>(p.ex.article_oovs.size()));
        switch (cfg.mode) {
          case TrainMode::PointerGen:
          case TrainMode::Pos:
          case TrainMode::SameFt:
          case TrainMode::PosFt:
            res.parts = build_mle_loss(res.tape, *model, enc, p.ex);
            break;
          case TrainMode::RlRouge:
            res.parts = build_mixed_loss(res.tape, *model, enc, p.ex, RewardKind::RougeL,
                                         lambda, nullptr, *baseline, sample_opts, rng,
                                         &res.empty_warnings);
            break;
          case TrainMode::RlSen:
            res.parts = build_mixed_loss(res.tape, *model, enc, p.ex,
                                         RewardKind::Sensationalism, lambda, scorer_ptr,
                                         *baseline, sample_opts, rng, &res.empty_warnings);
            break;
          case TrainMode::ArlSen:
            res.parts = build_arl_loss(res.tape, *model, enc, p.ex, p.sen_score,
                                       reward_kind, scorer_ptr, *baseline, sample_opts,
                                       rng, &res.empty_warnings);
            break;
        }
        res.tape.backward(res.parts.loss);
      });

      model->params().zero_grads();
      StepLog log;
      log.epoch = epoch;
      std::vector<const RolloutRecord*> rollouts;
      double reward_sum = 0.0;
      for (const auto& res : results) {
        res.tape.accumulate_param_grads(model->params(), 1.0 / b);
        log.loss += res.tape.value(res.parts.loss).at(0) / b;
        log.mle_part += res.parts.mle_value / b;
        log.rl_part += res.parts.rl_value / b;
        log.mean_weight += res.parts.weight_mle / b;
        result.empty_rollout_warnings += res.empty_warnings;
        if (res.parts.rollout) {
          rollouts.push_back(&*res.parts.rollout);
          reward_sum += res.parts.rollout->reward;
        }
      }
      model->params().clip_global_norm(cfg.clip);
      model->params().adam_step(gen_adam);
      if (!rollouts.empty()) {
        log.mean_reward = reward_sum / static_cast<double>(rollouts.size());
        log.l_b = fit_baseline(*baseline, rollouts, baseline_adam, cfg.clip);
      }
      state.step += 1;
      log.step = state.step;
      result.steps.push_back(log);

      const double wall_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - run_start)
                                 .count();
      json line;
      line["epoch"] = log.epoch;
      line["step"] = log.step;
      line["loss"] = log.loss;
      line["mle"] = log.mle_part;
      line["rl"] = log.rl_part;
      line["l_b"] = log.l_b;
      line["mean_reward"] = log.mean_reward;
      line["mean_weight"] = log.mean_weight;
      line["wall_ms"] = wall_ms;
      metrics << line.dump() << "\n";
    }
    metrics.flush();

    // validation
    std::vector<TokenList> decodes =
        greedy_decode_slice(*model, val_slice, cfg.max_decode_len, cfg.threads);
    double metric = 0.0;
    if (cfg.sen_validation()) {
      double s = 0.0;
      for (const auto& d : decodes) s += d.empty() ? 0.0 : scorer->score(d);
      metric = s / static_cast<double>(decodes.size());
    } else {
      metric = corpus_rouge(decodes, val_refs).rougeL.f1;
    }
    result.val_metrics.push_back(metric);

    state.epoch = epoch + 1;
    if (metric > state.best_metric) {
      state.best_metric = metric;
      state.evals_since_best = 0;
      save_checkpoint(result.best_dir, *model, baseline ? &*baseline : nullptr, state,
                      cfg.seed);
    } else {
      state.evals_since_best += 1;
    }
    save_checkpoint(result.last_dir, *model, baseline ? &*baseline : nullptr, state,
                    cfg.seed);
    result.epochs_run = state.epoch;
    if (state.evals_since_best >= cfg.patience) break;
  }

  result.best_metric = state.best_metric;
  return result;
}

// ---------------------------------------------------------------- generation

void generate_file(const std::string& checkpoint_dir, const std::string& corpus_path,
                   const std::string& out_path, int beam, int max_decode_len,
                   int max_article_tokens) {
  CheckpointData data = load_checkpoint(checkpoint_dir);
  Seq2SeqModel model(std::move(data.vocab), data.config, std::move(data.params));
  LoadOptions opts;
  opts.max_article_tokens = max_article_tokens;
  Corpus corpus = load_corpus(corpus_path, opts);
  require(!corpus.empty(), "generate: empty corpus '", corpus_path, "'");

  Corpus out(corpus.size());
  parallel_for(static_cast<int>(corpus.size()), 0, [&](int i) {
    const auto& r = corpus[static_cast<size_t>(i)];
    const TokenList article = whitespace_tokenize(r.article);
    require(!article.empty(), "generate: record ", i + 1, " has an empty article");
    TokenList headline = model.decode_tokens(article, beam, max_decode_len);
    CorpusRecord g;
    g.article = r.article;
    g.headline = join_tokens(headline);
    out[static_cast<size_t>(i)] = std::move(g);
  });
  save_corpus(out, out_path);
}

// ---------------------------------------------------------------- evaluation

EvalReport evaluate_files(const std::string& generated_path,
                          const std::string& references_path,
                          const std::string& scorer_dir) {
  Corpus generated = load_corpus(generated_path);
  Corpus references = load_corpus(references_path);
  require(generated.size() == references.size(), "evaluate: ", generated.size(),
          " generated lines vs ", references.size(), " references");
  require(!generated.empty(), "evaluate: empty inputs");

  std::vector<TokenList> cands, refs;
  for (size_t i = 0; i < generated.size(); ++i) {
    cands.push_back(whitespace_tokenize(generated[i].headline));
    refs.push_back(whitespace_tokenize(references[i].headline));
  }
  EvalReport report;
  report.count = generated.size();
  report.rouge = corpus_rouge(cands, refs);
  if (!scorer_dir.empty()) {
    ScorerModel scorer = load_scorer(scorer_dir);
    report.has_sen = true;
    for (const auto& c : cands) {
      const double s = c.empty() ? 0.0 : scorer.score(c);
      report.mean_sen += s;
      report.sen_histogram[static_cast<size_t>(std::min(9, static_cast<int>(s * 10.0)))] += 1;
    }
    report.mean_sen /= static_cast<double>(cands.size());
  }
  return report;
}

std::string eval_report_to_json(const EvalReport& report) {
  json j;
  auto put = [&](const char* name, const RougeScore& s) {
    j[name] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  };
  put("rouge1", report.rouge.rouge1);
  put("rouge2", report.rouge.rouge2);
  put("rougeL", report.rouge.rougeL);
  j["count"] = report.count;
  if (report.has_sen) {
    j["mean_sen"] = report.mean_sen;
    j["sen_histogram"] = report.sen_histogram;
  }
  return j.dump(2);
}

std::string eval_report_pretty(const EvalReport& report) {
  std::ostringstream os;
  auto row = [&](const char* name, const RougeScore& s) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-8s P %.4f  R %.4f  F1 %.4f\n", name, s.precision,
                  s.recall, s.f1);
    os << buf;
  };
  os << "pairs: " << report.count << "\n";
  row("RG-1", report.rouge.rouge1);
  row("RG-2", report.rouge.rouge2);
  row("RG-L", report.rouge.rougeL);
  if (report.has_sen) {
    os << "mean sen_score: " << report.mean_sen << "\nhistogram:";
    for (size_t i = 0; i < report.sen_histogram.size(); ++i)
      os << " " << report.sen_histogram[i];
    os << "\n";
  }
  return os.str();
}

double expected_mle_fraction(const Corpus& corpus, const ScorerModel& scorer) {
  require(!corpus.empty(), "expected_mle_fraction: empty corpus");
  double sum = 0.0;
  for (const auto& r : corpus) sum += scorer.score(whitespace_tokenize(r.headline));
  return sum / static_cast<double>(corpus.size());
}

}  // namespace senhead
