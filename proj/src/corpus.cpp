#include "senhead/corpus.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace senhead {

namespace {
using json = nlohmann::json;

std::string maybe_truncate(const std::string& text, int max_tokens, size_t* counter) {
  if (max_tokens <= 0) return text;
  TokenList toks = whitespace_tokenize(text);
  if (static_cast<int>(toks.size()) <= max_tokens) return text;
  toks.resize(static_cast<size_t>(max_tokens));
  if (counter) ++*counter;
  return join_tokens(toks);
}

CorpusRecord record_from_json(const json& j, size_t line_no) {
  require(j.is_object(), "corpus line ", line_no, ": expected a JSON object");
  require(j.contains("article") && j["article"].is_string(), "corpus line ", line_no,
          ": missing string field 'article'");
  require(j.contains("headline") && j["headline"].is_string(), "corpus line ", line_no,
          ": missing string field 'headline'");
  CorpusRecord r;
  r.article = j["article"].get<std::string>();
  r.headline = j["headline"].get<std::string>();
  if (j.contains("comments") && !j["comments"].is_null()) {
    require(j["comments"].is_number_integer(), "corpus line ", line_no,
            ": 'comments' must be an integer");
    long long c = j["comments"].get<long long>();
    require(c >= 0, "corpus line ", line_no, ": negative comment count");
    r.comments = c;
  }
  if (j.contains("sen_score") && !j["sen_score"].is_null()) {
    require(j["sen_score"].is_number(), "corpus line ", line_no,
            ": 'sen_score' must be a number");
    double s = j["sen_score"].get<double>();
    require(s >= 0.0 && s <= 1.0, "corpus line ", line_no, ": sen_score ", s,
            " outside [0,1]");
    r.sen_score = s;
  }
  if (j.contains("label") && !j["label"].is_null()) {
    require(j["label"].is_number_integer(), "corpus line ", line_no,
            ": 'label' must be 0 or 1");
    int l = j["label"].get<int>();
    require(l == 0 || l == 1, "corpus line ", line_no, ": label ", l, " must be 0 or 1");
    r.label = l;
  }
  return r;
}

json record_to_json(const CorpusRecord& r) {
  json j;
  j["article"] = r.article;
  j["headline"] = r.headline;
  if (r.comments) j["comments"] = *r.comments;
  if (r.sen_score) j["sen_score"] = *r.sen_score;
  if (r.label) j["label"] = *r.label;
  return j;
}
}  // namespace

Corpus corpus_from_jsonl(const std::string& text, const LoadOptions& opts,
                         LoadStats* stats) {
  Corpus corpus;
  std::istringstream is(text);
  std::string line;
  size_t line_no = 0;
  LoadStats local;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail("corpus line ", line_no, ": invalid JSON: ", e.what());
    }
    CorpusRecord r = record_from_json(j, line_no);
    r.article = maybe_truncate(r.article, opts.max_article_tokens, &local.truncated_articles);
    r.headline =
        maybe_truncate(r.headline, opts.max_headline_tokens, &local.truncated_headlines);
    corpus.push_back(std::move(r));
  }
  local.records = corpus.size();
  if (stats) *stats = local;
  return corpus;
}

Corpus load_corpus(const std::string& path, const LoadOptions& opts, LoadStats* stats) {
  std::ifstream is(path);
  require(is.good(), "load_corpus: cannot open '", path, "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return corpus_from_jsonl(buf.str(), opts, stats);
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& r : corpus) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream os(path);
  require(os.good(), "save_corpus: cannot open '", path, "'");
  os << corpus_to_jsonl(corpus);
  require(os.good(), "save_corpus: write failed for '", path, "'");
}

}  // namespace senhead
