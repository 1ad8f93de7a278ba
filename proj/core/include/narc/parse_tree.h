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

#ifndef NARC_PARSE_TREE_H_
#define NARC_PARSE_TREE_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace narc {

// Constituency tree. Preterminals carry their word in `token` and have no
// children; every other node has at least one child.
struct ParseTree {
  std::string label;
  std::vector<ParseTree> children;
  std::string token;

  bool IsLeaf() const { return children.empty(); }
  std::vector<std::string> Leaves() const;
  std::size_t LeafCount() const;
  // Penn Treebank bracketed form, with leaf escapes re-applied.
  std::string ToString() const;

  bool operator==(const ParseTree&) const = default;
};

// Reads one bracketed tree such as "(ROOT (NP (DT the) (NN cat)))". Leaf
// escapes -LRB- -RRB- -LSB- -RSB- -LCB- -RCB- decode to the bracket they name.
// Throws ValidationError: "empty input", "unbalanced bracket at char N", ...
ParseTree ParsePtb(std::string_view bracketed);

using ParseMap = std::map<std::string, ParseTree, std::less<>>;

// Sidecar JSONL with fields id and parse, one tree per query.
ParseMap ReadParseSidecar(const std::filesystem::path& path);

}  // namespace narc

#endif  // NARC_PARSE_TREE_H_
