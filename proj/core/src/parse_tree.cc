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

#include "narc/parse_tree.h"

#include <fstream>
#include <utility>

#include "nlohmann/json.hpp"
#include "narc/errors.h"

namespace narc {

namespace {

struct Escape {
  std::string_view escaped;
  std::string_view plain;
};

constexpr Escape kEscapes[] = {
    {"-LRB-", "("}, {"-RRB-", ")"}, {"-LSB-", "["},
    {"-RSB-", "]"}, {"-LCB-", "{"}, {"-RCB-", "}"},
};

std::string DecodeLeaf(std::string_view token) {
  for (const Escape& e : kEscapes) {
    if (token == e.escaped) return std::string(e.plain);
  }
  return std::string(token);
}

std::string EncodeLeaf(std::string_view token) {
  for (const Escape& e : kEscapes) {
    if (token == e.plain) return std::string(e.escaped);
  }
  return std::string(token);
}

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

class BracketReader {
 public:
  explicit BracketReader(std::string_view text) : text_(text) {}

  ParseTree ReadTop() {
    SkipSpace();
    if (pos_ == text_.size()) throw ValidationError("empty input");
    ParseTree tree = ReadNode();
    SkipSpace();
    if (pos_ != text_.size()) {
      if (text_[pos_] == ')') Fail("unbalanced bracket");
      Fail("unexpected text after tree");
    }
    return tree;
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw ValidationError(what + " at char " + std::to_string(pos_));
  }

  void SkipSpace() {
    while (pos_ < text_.size() && IsSpace(text_[pos_])) ++pos_;
  }

  std::string_view ReadSymbol() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !IsSpace(text_[pos_]) && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  // Expects '(' at pos_.
  ParseTree ReadNode() {
    if (text_[pos_] != '(') Fail("expected '('");
    const std::size_t open = pos_;
    ++pos_;
    ParseTree node;
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')') {
      node.label = std::string(ReadSymbol());
    }
    bool has_token = false;
    for (;;) {
      SkipSpace();
      if (pos_ == text_.size()) Fail("unbalanced bracket");
      const char c = text_[pos_];
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c == '(') {
        if (has_token) Fail("constituent mixes a word and subtrees");
        node.children.push_back(ReadNode());
      } else {
        if (has_token || !node.children.empty()) {
          Fail("constituent mixes a word and subtrees");
        }
        node.token = DecodeLeaf(ReadSymbol());
        has_token = true;
      }
    }
    if (!has_token && node.children.empty()) {
      pos_ = open;
      Fail("empty constituent");
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void CollectLeaves(const ParseTree& node, std::vector<std::string>& out) {
  if (node.IsLeaf()) {
    out.push_back(node.token);
    return;
  }
  for (const ParseTree& child : node.children) CollectLeaves(child, out);
}

void Render(const ParseTree& node, std::string& out) {
  out += '(';
  out += node.label;
  if (node.IsLeaf()) {
    out += ' ';
    out += EncodeLeaf(node.token);
  } else {
    for (const ParseTree& child : node.children) {
      out += ' ';
      Render(child, out);
    }
  }
  out += ')';
}

}  // namespace

std::vector<std::string> ParseTree::Leaves() const {
  std::vector<std::string> out;
  CollectLeaves(*this, out);
  return out;
}

std::size_t ParseTree::LeafCount() const {
  if (IsLeaf()) return 1;
  std::size_t n = 0;
  for (const ParseTree& child : children) n += child.LeafCount();
  return n;
}

std::string ParseTree::ToString() const {
  std::string out;
  Render(*this, out);
  return out;
}

ParseTree ParsePtb(std::string_view bracketed) {
  return BracketReader(bracketed).ReadTop();
}

ParseMap ReadParseSidecar(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  ParseMap parses;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.filename().string() + ": line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw ValidationError(where + ": invalid JSON");
    }
    if (j.contains("_meta")) continue;
    if (!j.contains("id") || !j["id"].is_string()) throw ValidationError(where + ": missing field id");
    if (!j.contains("parse") || !j["parse"].is_string()) {
      throw ValidationError(where + ": missing field parse");
    }
    try {
      parses.insert_or_assign(j["id"].get<std::string>(),
                              ParsePtb(j["parse"].get<std::string>()));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return parses;
}

}  // namespace narc
