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

#ifndef NARC_CORPUS_IO_H_
#define NARC_CORPUS_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "nlohmann/json.hpp"
#include "narc/example.h"

namespace narc {

// Reads a directory in the public RACE layout: one JSON document per article
// with fields "article", "questions", "options", "answers" (letters) and
// "id". Produces one Example per question with id "<file id>:<ordinal>"
// (ordinal counted from 0), ordered by filename and then question ordinal.
// Hidden files are ignored. The dataset's source_tag is the directory name.
Dataset LoadRaceDir(const std::filesystem::path& dir);

// Parses a single RACE article document; `origin` names it in errors.
std::vector<Example> ParseRaceArticle(const nlohmann::json& doc,
                                      const std::string& origin);

// Recorded in the header line ({"_meta": {...}}) of every JSONL file the
// tools write. Readers skip the header, except for source_tag.
struct OutputMeta {
  std::string subcommand;
  std::optional<std::string> op;
  std::optional<std::uint64_t> seed;
};

nlohmann::ordered_json MetaHeader(const OutputMeta& meta,
                                  const std::string& source_tag);
bool IsMetaLine(const nlohmann::json& line);

nlohmann::ordered_json ExampleToJson(const Example& example);
Example ExampleFromJson(const nlohmann::json& line);

// Canonical JSONL: a header line, then one example object per line in dataset
// order. read(write(d)) == d field for field.
void WriteCanonical(const Dataset& dataset, std::ostream& out,
                    const OutputMeta& meta = {});
void WriteCanonical(const Dataset& dataset, const std::filesystem::path& path,
                    const OutputMeta& meta = {});
Dataset ReadCanonical(std::istream& in);
Dataset ReadCanonical(const std::filesystem::path& path);

// A RACE directory or a canonical JSONL file, whichever `path` is.
Dataset LoadDataset(const std::filesystem::path& path);

}  // namespace narc

#endif  // NARC_CORPUS_IO_H_
