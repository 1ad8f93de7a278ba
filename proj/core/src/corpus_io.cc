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

#include "narc/corpus_io.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "narc/errors.h"

namespace narc {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const json& RequireField(const json& doc, const char* field,
                         const std::string& origin) {
  auto it = doc.find(field);
  if (it == doc.end()) {
    throw ValidationError(origin + ": missing field " + field);
  }
  return *it;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return buf.str();
}

std::string LineError(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

std::vector<Example> ParseRaceArticle(const json& doc, const std::string& origin) {
  if (!doc.is_object()) throw ValidationError(origin + ": not a JSON object");
  const json& article = RequireField(doc, "article", origin);
  const json& questions = RequireField(doc, "questions", origin);
  const json& options = RequireField(doc, "options", origin);
  const json& answers = RequireField(doc, "answers", origin);
  const json& id = RequireField(doc, "id", origin);
  if (!article.is_string() || !id.is_string() || !questions.is_array() ||
      !options.is_array() || !answers.is_array()) {
    throw ValidationError(origin + ": fields have the wrong JSON types");
  }
  if (questions.size() != options.size() || questions.size() != answers.size()) {
    throw ValidationError(origin +
                          ": questions, options and answers differ in length");
  }

  std::vector<Example> out;
  for (std::size_t q = 0; q < questions.size(); ++q) {
    const std::string where = origin + ": question " + std::to_string(q);
    Example ex;
    ex.id = id.get<std::string>() + ":" + std::to_string(q);
    ex.passage = article.get<std::string>();
    if (!questions[q].is_string()) throw ValidationError(where + ": query is not a string");
    ex.query = questions[q].get<std::string>();
    if (!options[q].is_array()) throw ValidationError(where + ": options is not a list");
    for (const json& opt : options[q]) {
      if (!opt.is_string()) throw ValidationError(where + ": option is not a string");
      ex.options.push_back(opt.get<std::string>());
    }
    if (!answers[q].is_string() || answers[q].get<std::string>().size() != 1) {
      throw ValidationError(where + ": malformed answer letter");
    }
    const char letter = answers[q].get<std::string>()[0];
    if (letter < 'A' || letter > 'Z') {
      throw ValidationError(where + ": malformed answer letter");
    }
    const auto index = static_cast<std::size_t>(letter - 'A');
    if (index >= ex.options.size()) {
      throw ValidationError(where + ": answer letter out of range");
    }
    ex.answer_index = index;
    try {
      ValidateExample(ex);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    out.push_back(std::move(ex));
  }
  return out;
}

Dataset LoadRaceDir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.empty() || name[0] == '.') continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  Dataset dataset;
  dataset.source_tag = dir.filename().empty() ? dir.parent_path().filename().string()
                                              : dir.filename().string();
  std::set<std::string> ids;
  for (const fs::path& file : files) {
    const std::string origin = file.filename().string();
    json doc;
    try {
      doc = json::parse(ReadFile(file));
    } catch (const json::parse_error& e) {
      throw ValidationError(origin + ": invalid JSON: " + e.what());
    }
    for (Example& ex : ParseRaceArticle(doc, origin)) {
      if (!ids.insert(ex.id).second) {
        throw ValidationError(origin + ": duplicate id " + ex.id);
      }
      dataset.examples.push_back(std::move(ex));
    }
  }
  return dataset;
}

ordered_json MetaHeader(const OutputMeta& meta, const std::string& source_tag) {
  ordered_json m;
  m["tool"] = "narc";
  m["version"] = NARC_VERSION;
  if (!meta.subcommand.empty()) m["subcommand"] = meta.subcommand;
  if (meta.op) m["op"] = *meta.op;
  if (meta.seed) m["seed"] = *meta.seed;
  m["source_tag"] = source_tag;
  ordered_json header;
  header["_meta"] = std::move(m);
  return header;
}

bool IsMetaLine(const json& line) {
  return line.is_object() && line.contains("_meta");
}

ordered_json ExampleToJson(const Example& ex) {
  ordered_json j;
  j["id"] = ex.id;
  j["passage"] = ex.passage;
  j["query"] = ex.query;
  j["options"] = ex.options;
  j["answer_index"] = ex.answer_index;
  if (ex.provenance) {
    const Provenance& p = *ex.provenance;
    ordered_json pj;
    pj["transform_id"] = std::string(TransformIdName(p.transform));
    if (p.answer_span) pj["answer_span"] = {p.answer_span->start, p.answer_span->end};
    if (p.query_span) pj["query_span"] = {p.query_span->start, p.query_span->end};
    if (p.seed) pj["seed"] = *p.seed;
    if (!p.notes.empty()) pj["notes"] = p.notes;
    j["provenance"] = std::move(pj);
  }
  return j;
}

namespace {

std::string RequireString(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw ValidationError(std::string("missing field ") + field);
  if (!it->is_string()) throw ValidationError(std::string("field ") + field + " must be a string");
  return it->get<std::string>();
}

Span ReadSpan(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
      !j[1].is_number_unsigned()) {
    throw ValidationError(std::string("field ") + field +
                          " must be [start, end] with non-negative integers");
  }
  Span s{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
  if (s.start >= s.end) {
    throw ValidationError(std::string("field ") + field + " is empty or reversed");
  }
  return s;
}

}  // namespace

Example ExampleFromJson(const json& j) {
  if (!j.is_object()) throw ValidationError("not a JSON object");
  Example ex;
  ex.id = RequireString(j, "id");
  ex.passage = RequireString(j, "passage");
  ex.query = RequireString(j, "query");
  auto opts = j.find("options");
  if (opts == j.end()) throw ValidationError("missing field options");
  if (!opts->is_array()) throw ValidationError("field options must be a list");
  for (const json& o : *opts) {
    if (!o.is_string()) throw ValidationError("field options must hold strings");
    ex.options.push_back(o.get<std::string>());
  }
  auto ai = j.find("answer_index");
  if (ai == j.end()) throw ValidationError("missing field answer_index");
  if (!ai->is_number_unsigned()) {
    throw ValidationError("field answer_index must be a non-negative integer");
  }
  ex.answer_index = ai->get<std::size_t>();
  if (auto pit = j.find("provenance"); pit != j.end() && !pit->is_null()) {
    const json& pj = *pit;
    if (!pj.is_object()) throw ValidationError("field provenance must be an object");
    Provenance p;
    const std::string tid = RequireString(pj, "transform_id");
    auto parsed = ParseTransformId(tid);
    if (!parsed) throw ValidationError("unknown transform_id " + tid);
    p.transform = *parsed;
    if (auto s = pj.find("answer_span"); s != pj.end()) p.answer_span = ReadSpan(*s, "answer_span");
    if (auto s = pj.find("query_span"); s != pj.end()) p.query_span = ReadSpan(*s, "query_span");
    if (auto s = pj.find("seed"); s != pj.end()) {
      if (!s->is_number_unsigned()) throw ValidationError("field seed must be a non-negative integer");
      p.seed = s->get<std::uint64_t>();
    }
    if (auto s = pj.find("notes"); s != pj.end()) {
      if (!s->is_string()) throw ValidationError("field notes must be a string");
      p.notes = s->get<std::string>();
    }
    ex.provenance = std::move(p);
  }
  ValidateExample(ex);
  return ex;
}

void WriteCanonical(const Dataset& dataset, std::ostream& out,
                    const OutputMeta& meta) {
  out << MetaHeader(meta, dataset.source_tag).dump() << '\n';
  for (const Example& ex : dataset.examples) {
    out << ExampleToJson(ex).dump() << '\n';
  }
}

void WriteCanonical(const Dataset& dataset, const fs::path& path,
                    const OutputMeta& meta) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  WriteCanonical(dataset, out, meta);
  out.flush();
  if (!out) throw IoError("error writing " + path.string());
}

Dataset ReadCanonical(std::istream& in) {
  Dataset dataset;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      throw ValidationError(LineError(line_no, "invalid JSON"));
    }
    if (IsMetaLine(j)) {
      const json& m = j["_meta"];
      if (m.is_object() && m.contains("source_tag") && m["source_tag"].is_string()) {
        dataset.source_tag = m["source_tag"].get<std::string>();
      }
      continue;
    }
    Example ex;
    try {
      ex = ExampleFromJson(j);
    } catch (const ValidationError& e) {
      throw ValidationError(LineError(line_no, e.what()));
    }
    if (!ids.insert(ex.id).second) {
      throw ValidationError(LineError(line_no, "duplicate id " + ex.id));
    }
    dataset.examples.push_back(std::move(ex));
  }
  if (in.bad()) throw IoError("error reading canonical dataset");
  return dataset;
}

Dataset ReadCanonical(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Dataset d = ReadCanonical(in);
  if (d.source_tag.empty()) d.source_tag = path.stem().string();
  return d;
}

Dataset LoadDataset(const fs::path& path) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) return LoadRaceDir(path);
  if (!fs::exists(path, ec)) throw IoError("no such file or directory: " + path.string());
  return ReadCanonical(path);
}

}  // namespace narc
