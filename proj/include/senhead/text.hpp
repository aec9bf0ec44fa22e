#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "senhead/common.hpp"

namespace senhead {

using TokenList = std::vector<std::string>;
using Tokenizer = std::function<TokenList(const std::string&)>;

// Default tokenizer: split on ASCII whitespace runs. External segmenters
// plug in through the Tokenizer alias.
TokenList whitespace_tokenize(const std::string& text);

std::string join_tokens(const TokenList& tokens);

// Token <-> id map with four reserved ids. Ids are contiguous; reserved
// tokens never count against the size cap. Immutable once built.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kStart = 2;
  static constexpr int kStop = 3;
  static constexpr int kDefaultCap = 50000;

  static const char* pad_token() { return "<pad>"; }
  static const char* unk_token() { return "<unk>"; }
  static const char* start_token() { return "<s>"; }
  static const char* stop_token() { return "</s>"; }

  // Most frequent tokens kept up to cap; frequency ties break
  // lexicographically. Reserved tokens are excluded from the cap.
  static Vocab build(const std::vector<TokenList>& corpus, int cap = kDefaultCap);

  int size() const { return static_cast<int>(id_to_token_.size()); }
  // Returns the id, or kUnk for unknown tokens.
  int id(const std::string& token) const;
  bool contains(const std::string& token) const { return token_to_id_.count(token) > 0; }
  const std::string& token(int id) const;

  // One non-reserved token per line; line number == id - 4.
  void save(const std::string& path) const;
  static Vocab load(const std::string& path);

  uint64_t hash() const;

 private:
  Vocab();
  void add(const std::string& token);
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, int> token_to_id_;
};

// A training pair with the article's out-of-vocabulary tokens mapped onto a
// per-example extension of the vocab (ids |V|, |V|+1, ... in first-appearance
// order), which is what lets the copy mechanism emit them.
struct ExtendedExample {
  std::vector<int> article_ids;       // extended ids
  TokenList article_oovs;             // surface forms, in extension order
  std::vector<int> headline_target;   // extended id when copyable, else UNK
  std::vector<int> headline_input;    // every OOV as UNK
};

ExtendedExample extend_with_oovs(const TokenList& article, const TokenList& headline,
                                 const Vocab& vocab);

// Exact inverse of id assignment (extended ids resolve through article_oovs).
TokenList ids_to_tokens(const std::vector<int>& ids, const Vocab& vocab,
                        const TokenList& article_oovs);

// Presentation form of a decoded sequence: STOP/START/PAD dropped.
TokenList render_surface(const std::vector<int>& ids, const Vocab& vocab,
                         const TokenList& article_oovs);

}  // namespace senhead
