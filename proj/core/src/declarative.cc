// Copyright 2026 The narc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "narc/declarative.h"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "narc/errors.h"

namespace narc {

namespace {

constexpr std::array<std::string_view, 9> kWhWords = {
    "what", "which", "who", "whom", "whose", "when", "where", "why", "how"};

// Auxiliaries the fallback strips after a leading wh-word.
constexpr std::array<std::string_view, 12> kFallbackAuxiliaries = {
    "is", "are", "was", "were", "do", "does", "did",
    "can", "could", "will", "would", "should"};

// Auxiliaries recognised at the head of an inverted SQ.
constexpr std::array<std::string_view, 22> kAuxiliaries = {
    "is",  "are",   "was",   "were",   "am",  "be",    "been", "do",
    "does", "did",  "have",  "has",    "had", "can",   "could", "will",
    "would", "shall", "should", "may", "might", "must"};

template <std::size_t N>
bool OneOf(const std::array<std::string_view, N>& words, std::string_view w) {
  return std::find(words.begin(), words.end(), w) != words.end();
}

bool IsAlnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || static_cast<unsigned char>(c) >= 0x80;
}

bool IsTerminator(char c) { return c == '.' || c == '!' || c == '?'; }

std::string_view TrimSpace(std::string_view s) {
  while (!s.empty() && IsAsciiSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsAsciiSpace(s.back())) s.remove_suffix(1);
  return s;
}

std::string CollapseSpaces(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == ' ' && !out.empty() && out.back() == ' ') continue;
    out += c;
  }
  return out;
}

// Ends the sentence with exactly one '.', replacing whatever run of
// terminators it had.
void Terminate(DeclarativeResult& result) {
  std::string& s = result.sentence;
  while (!s.empty() && IsAsciiSpace(s.back())) s.pop_back();
  while (!s.empty() && IsTerminator(s.back())) s.pop_back();
  s += '.';
  if (result.answer_range) {
    CharRange& r = *result.answer_range;
    r.end = std::min(r.end, s.size());
    if (r.begin >= r.end) result.answer_range.reset();
  }
}

// --- Verb morphology ------------------------------------------------------

const std::map<std::string, std::string, std::less<>>& IrregularPast() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"be", "was"},       {"become", "became"}, {"begin", "began"},
      {"break", "broke"},  {"bring", "brought"}, {"build", "built"},
      {"buy", "bought"},   {"catch", "caught"},  {"choose", "chose"},
      {"come", "came"},    {"cost", "cost"},     {"cut", "cut"},
      {"do", "did"},       {"draw", "drew"},     {"drink", "drank"},
      {"drive", "drove"},  {"drop", "dropped"},  {"eat", "ate"},
      {"fall", "fell"},    {"feel", "felt"},     {"find", "found"},
      {"fly", "flew"},     {"forget", "forgot"}, {"get", "got"},
      {"give", "gave"},    {"go", "went"},       {"grow", "grew"},
      {"have", "had"},     {"hear", "heard"},    {"hide", "hid"},
      {"hit", "hit"},      {"hold", "held"},     {"keep", "kept"},
      {"know", "knew"},    {"lead", "led"},      {"learn", "learned"},
      {"leave", "left"},   {"lend", "lent"},     {"let", "let"},
      {"lose", "lost"},    {"make", "made"},     {"mean", "meant"},
      {"meet", "met"},     {"pay", "paid"},      {"plan", "planned"},
      {"put", "put"},      {"read", "read"},     {"ride", "rode"},
      {"ring", "rang"},    {"rise", "rose"},     {"run", "ran"},
      {"say", "said"},     {"see", "saw"},       {"sell", "sold"},
      {"send", "sent"},    {"set", "set"},       {"shop", "shopped"},
      {"show", "showed"},  {"sing", "sang"},     {"sit", "sat"},
      {"sleep", "slept"},  {"speak", "spoke"},   {"spend", "spent"},
      {"stand", "stood"},  {"steal", "stole"},   {"stop", "stopped"},
      {"swim", "swam"},    {"take", "took"},     {"teach", "taught"},
      {"tell", "told"},    {"think", "thought"}, {"throw", "threw"},
      {"understand", "understood"},              {"wake", "woke"},
      {"wear", "wore"},    {"win", "won"},       {"write", "wrote"},
  };
  return table;
}

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

std::string ThirdPerson(std::string_view verb) {
  const std::string v(verb);
  const std::string lower = ToLowerAscii(v);
  if (lower == "have") return v.substr(0, v.size() - 2) + "s";
  if (lower == "be") return "is";
  auto ends = [&](std::string_view suffix) {
    return lower.size() >= suffix.size() &&
           lower.compare(lower.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends("s") || ends("x") || ends("z") || ends("ch") || ends("sh") || ends("o")) {
    return v + "es";
  }
  if (lower.size() >= 2 && lower.back() == 'y' && !IsVowel(lower[lower.size() - 2])) {
    return v.substr(0, v.size() - 1) + "ies";
  }
  return v + "s";
}

std::string Past(std::string_view verb) {
  const std::string v(verb);
  const std::string lower = ToLowerAscii(v);
  if (auto it = IrregularPast().find(lower); it != IrregularPast().end()) {
    return it->second;
  }
  if (!lower.empty() && lower.back() == 'e') return v + "d";
  if (lower.size() >= 2 && lower.back() == 'y' && !IsVowel(lower[lower.size() - 2])) {
    return v.substr(0, v.size() - 1) + "ied";
  }
  return v + "ed";
}

std::string InflectForAuxiliary(std::string_view verb, std::string_view aux) {
  if (aux == "does") return ThirdPerson(verb);
  if (aux == "did") return Past(verb);
  return std::string(verb);
}

// Word forms the fallback counts as verbs.
const std::unordered_set<std::string>& VerbLexicon() {
  static const std::unordered_set<std::string> lexicon = [] {
    static constexpr std::string_view kBase[] = {
        "agree", "appear", "ask", "become", "begin", "believe", "break",
        "bring", "build", "buy", "call", "carry", "catch", "change", "choose",
        "come", "cost", "cut", "decide", "die", "do", "draw", "drink",
        "drive", "eat", "enjoy", "explain", "fall", "feel", "find", "finish",
        "fly", "follow", "forget", "get", "give", "go", "grow", "happen",
        "hate", "have", "hear", "help", "hide", "hit", "hold", "hope",
        "keep", "kill", "know", "learn", "leave", "let", "like", "listen",
        "live", "look", "lose", "love", "make", "mean", "meet", "move",
        "need", "open", "pay", "play", "put", "read", "receive", "remember",
        "return", "ride", "run", "say", "see", "seem", "sell", "send",
        "show", "sing", "sit", "sleep", "speak", "spend", "stand", "start",
        "stay", "stop", "suggest", "swim", "take", "talk", "teach", "tell",
        "think", "throw", "try", "turn", "understand", "use", "visit",
        "wait", "walk", "want", "watch", "wear", "win", "work", "write"};
    std::unordered_set<std::string> s;
    for (std::string_view aux : kAuxiliaries) s.emplace(aux);
    for (std::string_view base : kBase) {
      std::string b(base);
      s.insert(b);
      s.insert(ThirdPerson(b));
      s.insert(Past(b));
      if (b.back() == 'e' && b.size() > 2) {
        s.insert(b.substr(0, b.size() - 1) + "ing");
      } else {
        s.insert(b + "ing");
      }
    }
    for (const auto& [base, past] : IrregularPast()) s.insert(past);
    return s;
  }();
  return lexicon;
}

bool LooksLikeVerb(std::string_view token) {
  const std::string lower = ToLowerAscii(token);
  if (VerbLexicon().contains(lower)) return true;
  return lower.size() >= 4 && lower.compare(lower.size() - 2, 2, "ed") == 0;
}

// --- Rule 1: blank substitution -------------------------------------------

DeclarativeResult SubstituteBlank(std::string_view query, std::string_view answer) {
  const std::size_t first = query.find('_');
  std::size_t end = first;
  for (;;) {
    while (end < query.size() && query[end] == '_') ++end;
    std::size_t look = end;
    while (look < query.size() && (query[look] == ' ' || query[look] == '\t')) ++look;
    if (look < query.size() && query[look] == '_') {
      end = look;
      continue;
    }
    break;
  }

  std::string prefix = CollapseSpaces(query.substr(0, first));
  std::string rest;
  for (char c : query.substr(end)) {
    if (c != '_') rest += c;
  }
  rest = CollapseSpaces(rest);
  while (!prefix.empty() && IsAsciiSpace(prefix.front())) prefix.erase(prefix.begin());

  // Keep the answer a separate token from whatever the blank touched.
  if (!prefix.empty() && (IsAlnum(prefix.back()) || prefix.back() == '\'')) {
    prefix += ' ';
  }
  if (!rest.empty() && IsAlnum(rest.front()) && IsAlnum(answer.back())) {
    rest.insert(rest.begin(), ' ');
  }

  DeclarativeResult result;
  result.method = DeclarativeMethod::kBlankSubstitution;
  result.sentence = prefix;
  result.answer_range = CharRange{prefix.size(), prefix.size() + answer.size()};
  result.sentence += answer;
  result.sentence += rest;
  Terminate(result);
  return result;
}

// --- Rule 2: parse-driven conversion ----------------------------------------

// Surfaces a PTB leaf may have in the raw query.
std::vector<std::string> LeafSurfaces(const std::string& leaf) {
  if (leaf == "``" || leaf == "''") {
    return {leaf, "\"", "\xE2\x80\x9C", "\xE2\x80\x9D", "'"};
  }
  if (leaf == "`") return {"`", "'", "\xE2\x80\x98"};
  if (leaf == "'") return {"'", "\xE2\x80\x99"};
  if (leaf == "--") return {"--", "\xE2\x80\x93", "\xE2\x80\x94"};
  if (leaf == "...") return {"...", "\xE2\x80\xA6"};
  std::vector<std::string> out = {leaf};
  if (!leaf.empty() && leaf[0] == '\'') out.push_back("\xE2\x80\x99" + leaf.substr(1));
  return out;
}

// Byte range of each leaf in the query, or nullopt when the leaves do not
// spell out the query.
std::optional<std::vector<CharRange>> AlignLeaves(std::string_view query,
                                                  const std::vector<std::string>& leaves) {
  std::vector<CharRange> ranges;
  std::size_t pos = 0;
  for (const std::string& leaf : leaves) {
    while (pos < query.size() && IsAsciiSpace(query[pos])) ++pos;
    std::size_t matched = 0;
    for (const std::string& surface : LeafSurfaces(leaf)) {
      if (surface.size() > matched && query.compare(pos, surface.size(), surface) == 0) {
        matched = surface.size();
      }
    }
    if (matched == 0) return std::nullopt;
    ranges.push_back({pos, pos + matched});
    pos += matched;
  }
  return ranges;
}

struct NodeRef {
  const ParseTree* node;
  std::size_t begin;  // first leaf
  std::size_t end;    // one past the last leaf
};

std::vector<NodeRef> Children(const NodeRef& ref) {
  std::vector<NodeRef> out;
  std::size_t at = ref.begin;
  for (const ParseTree& child : ref.node->children) {
    const std::size_t n = child.LeafCount();
    out.push_back({&child, at, at + n});
    at += n;
  }
  return out;
}

std::optional<NodeRef> FindFirst(const NodeRef& ref,
                                 const std::function<bool(const ParseTree&)>& pred) {
  if (pred(*ref.node)) return ref;
  for (const NodeRef& child : Children(ref)) {
    if (auto hit = FindFirst(child, pred)) return hit;
  }
  return std::nullopt;
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool IsAuxiliaryNode(const ParseTree& node) {
  if (!node.IsLeaf()) return false;
  const bool verbal = node.label == "MD" || StartsWith(node.label, "VB");
  return verbal && OneOf(kAuxiliaries, ToLowerAscii(node.token));
}

struct Piece {
  enum Kind { kQuery, kText, kAnswer } kind;
  std::size_t begin = 0;  // leaves, for kQuery
  std::size_t end = 0;
  std::string text;       // for kText
};

std::optional<DeclarativeResult> ConvertWithParse(std::string_view query,
                                                  std::string_view answer,
                                                  const ParseTree& tree) {
  const auto aligned = AlignLeaves(query, tree.Leaves());
  if (!aligned) return std::nullopt;

  const NodeRef root{&tree, 0, tree.LeafCount()};
  const auto sbarq = FindFirst(root, [](const ParseTree& n) { return n.label == "SBARQ"; });
  if (!sbarq) return std::nullopt;
  const std::vector<NodeRef> clause = Children(*sbarq);
  auto wh = std::find_if(clause.begin(), clause.end(), [](const NodeRef& r) {
    return StartsWith(r.node->label, "WH");
  });
  if (wh == clause.end()) return std::nullopt;
  auto sq = std::find_if(wh + 1, clause.end(),
                         [](const NodeRef& r) { return r.node->label == "SQ"; });
  if (sq == clause.end()) return std::nullopt;

  const bool answer_after_verb =
      wh->node->label == "WHNP" || wh->node->label == "WHADJP";

  std::vector<NodeRef> sq_kids = Children(*sq);
  while (!sq_kids.empty() && sq_kids.back().node->label == ".") sq_kids.pop_back();
  if (sq_kids.empty()) return std::nullopt;

  std::vector<Piece> pieces;
  auto query_piece = [&](std::size_t b, std::size_t e) {
    if (b < e) pieces.push_back({Piece::kQuery, b, e, {}});
  };

  auto subject = sq_kids.end();
  if (IsAuxiliaryNode(*sq_kids.front().node)) {
    subject = std::find_if(sq_kids.begin() + 1, sq_kids.end(),
                           [](const NodeRef& r) { return r.node->label == "NP"; });
  }

  if (subject != sq_kids.end()) {
    // Inverted question: auxiliary, [adverbs], subject, rest.
    const NodeRef& aux = sq_kids.front();
    const std::string aux_word = ToLowerAscii(aux.node->token);
    auto vp = std::find_if(subject + 1, sq_kids.end(),
                           [](const NodeRef& r) { return r.node->label == "VP"; });
    const bool do_support =
        (aux_word == "do" || aux_word == "does" || aux_word == "did") &&
        vp != sq_kids.end();

    query_piece(subject->begin, subject->end);
    if (!do_support) query_piece(aux.begin, aux.end);
    for (auto it = sq_kids.begin() + 1; it != subject; ++it) query_piece(it->begin, it->end);

    bool placed = false;
    if (answer_after_verb && vp == sq_kids.end()) {
      pieces.push_back({Piece::kAnswer, 0, 0, {}});
      placed = true;
    }
    for (auto it = subject + 1; it != sq_kids.end(); ++it) {
      if (it != vp) {
        query_piece(it->begin, it->end);
        continue;
      }
      const auto head = FindFirst(*vp, [](const ParseTree& n) {
        return n.IsLeaf() && (StartsWith(n.label, "VB") || n.label == "MD");
      });
      if (!head) {
        query_piece(vp->begin, vp->end);
        continue;
      }
      query_piece(vp->begin, head->begin);
      if (do_support) {
        pieces.push_back({Piece::kText, 0, 0,
                          InflectForAuxiliary(head->node->token, aux_word)});
      } else {
        query_piece(head->begin, head->end);
      }
      if (answer_after_verb && !placed) {
        pieces.push_back({Piece::kAnswer, 0, 0, {}});
        placed = true;
      }
      query_piece(head->end, vp->end);
    }
    if (!placed) pieces.push_back({Piece::kAnswer, 0, 0, {}});
  } else {
    // The wh-phrase is the subject: the answer takes its place.
    pieces.push_back({Piece::kAnswer, 0, 0, {}});
    for (const NodeRef& kid : sq_kids) query_piece(kid.begin, kid.end);
  }

  DeclarativeResult result;
  result.method = DeclarativeMethod::kParseRule;
  const std::vector<CharRange>& at = *aligned;
  for (const Piece& piece : pieces) {
    if (!result.sentence.empty()) result.sentence += ' ';
    switch (piece.kind) {
      case Piece::kQuery: {
        const std::size_t b = at[piece.begin].begin;
        result.sentence += query.substr(b, at[piece.end - 1].end - b);
        break;
      }
      case Piece::kText:
        result.sentence += piece.text;
        break;
      case Piece::kAnswer:
        result.answer_range =
            CharRange{result.sentence.size(), result.sentence.size() + answer.size()};
        result.sentence += answer;
        break;
    }
  }
  if (pieces.front().kind != Piece::kAnswer && !result.sentence.empty() &&
      result.sentence[0] >= 'a' && result.sentence[0] <= 'z') {
    result.sentence[0] = static_cast<char>(result.sentence[0] - 'a' + 'A');
  }
  Terminate(result);
  return result;
}

// --- Rule 3: heuristic fallback --------------------------------------------

std::string_view StripQuestionMark(std::string_view s) {
  s = TrimSpace(s);
  while (!s.empty() && s.back() == '?') s.remove_suffix(1);
  return TrimSpace(s);
}

DeclarativeResult Fallback(std::string_view query, std::string_view answer) {
  DeclarativeResult result;
  result.method = DeclarativeMethod::kHeuristicFallback;
  const TokenizedText tokens = Tokenize(query);

  auto finish = [&](std::string_view head, std::string_view joiner) {
    result.sentence = std::string(head);
    if (!result.sentence.empty()) result.sentence += joiner;
    result.answer_range =
        CharRange{result.sentence.size(), result.sentence.size() + answer.size()};
    result.sentence += answer;
    Terminate(result);
    return result;
  };

  if (tokens.empty() || !OneOf(kWhWords, ToLowerAscii(tokens.tokens[0]))) {
    result.warning = true;
    return finish(StripQuestionMark(query), " ");
  }

  std::size_t cut = tokens.offsets[0].end;
  std::size_t next = 1;
  if (tokens.size() > 1 && OneOf(kFallbackAuxiliaries, ToLowerAscii(tokens.tokens[1]))) {
    cut = tokens.offsets[1].end;
    next = 2;
  }
  const std::string_view remainder = StripQuestionMark(query.substr(cut));
  bool has_verb = false;
  for (std::size_t i = next; i < tokens.size(); ++i) {
    if (LooksLikeVerb(tokens.tokens[i])) {
      has_verb = true;
      break;
    }
  }
  return finish(remainder, has_verb ? " " : " is ");
}

}  // namespace

std::string_view DeclarativeMethodName(DeclarativeMethod method) {
  switch (method) {
    case DeclarativeMethod::kBlankSubstitution:
      return "blank_substitution";
    case DeclarativeMethod::kParseRule:
      return "parse_rule";
    case DeclarativeMethod::kHeuristicFallback:
      return "heuristic_fallback";
  }
  return "unknown";
}

DeclarativeResult ToDeclarative(std::string_view query, std::string_view answer,
                                const ParseTree* parse) {
  answer = TrimSpace(answer);
  if (TrimSpace(query).empty()) throw ValidationError("query is empty");
  if (answer.empty()) throw ValidationError("answer is empty");

  if (query.find('_') != std::string_view::npos) return SubstituteBlank(query, answer);
  if (parse != nullptr) {
    if (auto converted = ConvertWithParse(query, answer, *parse)) return *converted;
    DeclarativeResult fallback = Fallback(query, answer);
    fallback.warning = true;
    return fallback;
  }
  return Fallback(query, answer);
}

}  // namespace narc
