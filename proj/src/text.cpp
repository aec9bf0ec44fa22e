#include "senhead/text.hpp"

#include <algorithm>
#include <fstream>
#include <map>

namespace senhead {

TokenList whitespace_tokenize(const std::string& text) {
  TokenList out;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!cur.empty()) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string join_tokens(const TokenList& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

Vocab::Vocab() {
  add(pad_token());
  add(unk_token());
  add(start_token());
  add(stop_token());
}

void Vocab::add(const std::string& token) {
  token_to_id_.emplace(token, static_cast<int>(id_to_token_.size()));
  id_to_token_.push_back(token);
}

Vocab Vocab::build(const std::vector<TokenList>& corpus, int cap) {
  require(cap > 0, "Vocab::build: cap must be positive, got ", cap);
  std::map<std::string, long long> counts;  // ordered: lexicographic tie-break for free
  long long total = 0;
  for (const auto& toks : corpus)
    for (const auto& t : toks) {
      ++counts[t];
      ++total;
    }
  require(total > 0, "Vocab::build: empty corpus");

  std::vector<std::pair<std::string, long long>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  Vocab v;
  const std::string reserved[] = {pad_token(), unk_token(), start_token(), stop_token()};
  int kept = 0;
  for (const auto& [tok, cnt] : ranked) {
    if (kept >= cap) break;
    if (std::find(std::begin(reserved), std::end(reserved), tok) != std::end(reserved))
      continue;
    v.add(tok);
    ++kept;
  }
  return v;
}

int Vocab::id(const std::string& token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocab::token(int id) const {
  require(id >= 0 && id < size(), "Vocab::token: id ", id, " out of range [0,", size(), ")");
  return id_to_token_[static_cast<size_t>(id)];
}

void Vocab::save(const std::string& path) const {
  std::ofstream os(path);
  require(os.good(), "Vocab::save: cannot open '", path, "'");
  for (int i = 4; i < size(); ++i) os << id_to_token_[static_cast<size_t>(i)] << '\n';
  require(os.good(), "Vocab::save: write failed for '", path, "'");
}

Vocab Vocab::load(const std::string& path) {
  std::ifstream is(path);
  require(is.good(), "Vocab::load: cannot open '", path, "'");
  Vocab v;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    require(!v.contains(line), "Vocab::load: duplicate token '", line, "' in ", path);
    v.add(line);
  }
  return v;
}

uint64_t Vocab::hash() const {
  // FNV-1a over tokens with separators
  uint64_t h = 1469598103934665603ULL;
  for (const auto& tok : id_to_token_) {
    for (unsigned char c : tok) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  }
  return h;
}

ExtendedExample extend_with_oovs(const TokenList& article, const TokenList& headline,
                                 const Vocab& vocab) {
  require(!article.empty(), "extend_with_oovs: empty article");
  require(!headline.empty(), "extend_with_oovs: empty headline");
  ExtendedExample ex;
  std::unordered_map<std::string, int> oov_ids;
  for (const auto& tok : article) {
    if (vocab.contains(tok)) {
      ex.article_ids.push_back(vocab.id(tok));
    } else {
      auto it = oov_ids.find(tok);
      if (it == oov_ids.end()) {
        int ext = vocab.size() + static_cast<int>(ex.article_oovs.size());
        it = oov_ids.emplace(tok, ext).first;
        ex.article_oovs.push_back(tok);
      }
      ex.article_ids.push_back(it->second);
    }
  }
  for (const auto& tok : headline) {
    if (vocab.contains(tok)) {
      int id = vocab.id(tok);
      ex.headline_target.push_back(id);
      ex.headline_input.push_back(id);
    } else {
      auto it = oov_ids.find(tok);
      ex.headline_target.push_back(it == oov_ids.end() ? Vocab::kUnk : it->second);
      ex.headline_input.push_back(Vocab::kUnk);
    }
  }
  return ex;
}

TokenList ids_to_tokens(const std::vector<int>& ids, const Vocab& vocab,
                        const TokenList& article_oovs) {
  TokenList out;
  out.reserve(ids.size());
  const int limit = vocab.size() + static_cast<int>(article_oovs.size());
  for (int id : ids) {
    require(id >= 0 && id < limit, "ids_to_tokens: id ", id, " out of range [0,", limit,
            ")");
    if (id < vocab.size())
      out.push_back(vocab.token(id));
    else
      out.push_back(article_oovs[static_cast<size_t>(id - vocab.size())]);
  }
  return out;
}

TokenList render_surface(const std::vector<int>& ids, const Vocab& vocab,
                         const TokenList& article_oovs) {
  TokenList out;
  for (int id : ids) {
    if (id == Vocab::kStop || id == Vocab::kStart || id == Vocab::kPad) continue;
    if (id < vocab.size())
      out.push_back(vocab.token(id));
    else {
      const int j = id - vocab.size();
      require(j < static_cast<int>(article_oovs.size()), "render_surface: id ", id,
              " out of range");
      out.push_back(article_oovs[static_cast<size_t>(j)]);
    }
  }
  return out;
}

}  // namespace senhead
