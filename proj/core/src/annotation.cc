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

#include "narc/annotation.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "narc/rng.h"
#include "narc/sentences.h"
#include "narc/transforms.h"

namespace narc {

std::string_view AnnotationKindName(AnnotationKind kind) {
  switch (kind) {
    case AnnotationKind::kSentenceSelection: return "sentence_selection";
    case AnnotationKind::kConfusingOption: return "confusing_option";
  }
  return "?";
}

std::optional<AnnotationKind> ParseAnnotationKind(std::string_view name) {
  if (name == "sentence_selection") return AnnotationKind::kSentenceSelection;
  if (name == "confusing_option") return AnnotationKind::kConfusingOption;
  return std::nullopt;
}

std::optional<AnnotationKind> ParseTaskName(std::string_view name) {
  if (name == "p5") return AnnotationKind::kSentenceSelection;
  if (name == "o3h") return AnnotationKind::kConfusingOption;
  return std::nullopt;
}

nlohmann::ordered_json AnnotationToJson(const Annotation& a) {
  nlohmann::ordered_json j;
  j["example_id"] = a.example_id;
  j["annotator"] = a.annotator;
  j["kind"] = AnnotationKindName(a.kind);
  if (a.kind == AnnotationKind::kSentenceSelection) {
    j["payload"] = a.sentences;
  } else {
    j["payload"] = a.option;
  }
  j["timestamp"] = a.timestamp;
  return j;
}

Annotation AnnotationFromJson(const nlohmann::json& body, std::int64_t default_timestamp) {
  if (!body.is_object()) throw AnnotationFieldError("", "annotation must be a JSON object");
  auto string_field = [&](const char* name) {
    if (!body.contains(name) || !body[name].is_string() ||
        body[name].get<std::string>().empty()) {
      throw AnnotationFieldError(name, std::string(name) + " must be a non-empty string");
    }
    return body[name].get<std::string>();
  };
  Annotation a;
  a.example_id = string_field("example_id");
  a.annotator = string_field("annotator");
  auto kind = ParseAnnotationKind(string_field("kind"));
  if (!kind) {
    throw AnnotationFieldError("kind", "kind must be sentence_selection or confusing_option");
  }
  a.kind = *kind;

  if (!body.contains("payload")) throw AnnotationFieldError("payload", "missing payload");
  const nlohmann::json& payload = body["payload"];
  if (a.kind == AnnotationKind::kSentenceSelection) {
    if (!payload.is_array() || payload.empty()) {
      throw AnnotationFieldError("payload", "payload must be a non-empty list of sentence indices");
    }
    for (const nlohmann::json& v : payload) {
      if (!v.is_number_unsigned()) {
        throw AnnotationFieldError("payload", "sentence indices must be non-negative integers");
      }
      a.sentences.push_back(v.get<std::size_t>());
    }
    for (std::size_t i = 1; i < a.sentences.size(); ++i) {
      if (a.sentences[i] <= a.sentences[i - 1]) {
        throw AnnotationFieldError("payload", "sentence indices must be strictly increasing");
      }
    }
  } else {
    if (!payload.is_number_unsigned()) {
      throw AnnotationFieldError("payload", "payload must be an option index");
    }
    a.option = payload.get<std::size_t>();
  }

  if (body.contains("timestamp") && !body["timestamp"].is_null()) {
    if (!body["timestamp"].is_number_integer()) {
      throw AnnotationFieldError("timestamp", "timestamp must be an integer");
    }
    a.timestamp = body["timestamp"].get<std::int64_t>();
  } else {
    a.timestamp = default_timestamp;
  }
  return a;
}

void ValidateAnnotation(const Annotation& a, const Example& example) {
  if (a.example_id != example.id) {
    throw AnnotationFieldError("example_id", "annotation is for " + a.example_id);
  }
  if (a.kind == AnnotationKind::kSentenceSelection) {
    const std::size_t count = SplitSentences(example.passage).size();
    if (a.sentences.empty()) throw AnnotationFieldError("payload", "no sentences selected");
    for (std::size_t i = 0; i < a.sentences.size(); ++i) {
      if (a.sentences[i] >= count) {
        throw AnnotationFieldError("payload", "sentence " + std::to_string(a.sentences[i]) +
                                                  " out of range; passage has " +
                                                  std::to_string(count));
      }
      if (i > 0 && a.sentences[i] <= a.sentences[i - 1]) {
        throw AnnotationFieldError("payload", "sentence indices must be strictly increasing");
      }
    }
    return;
  }
  if (a.option >= example.options.size()) {
    throw AnnotationFieldError("payload", "option " + std::to_string(a.option) +
                                              " out of range");
  }
  if (a.option == example.answer_index) {
    throw AnnotationFieldError("payload", "cannot mark the correct option");
  }
}

namespace {

std::vector<Annotation> ParseStoreText(const std::string& text, const std::string& name) {
  std::vector<Annotation> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = name + ": line " + std::to_string(line_no) + ": ";
    try {
      out.push_back(AnnotationFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error&) {
      throw ValidationError(where + "invalid JSON");
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  return out;
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

std::vector<Annotation> ReadAnnotations(const std::filesystem::path& path) {
  return ParseStoreText(ReadAll(path), path.filename().string());
}

AnnotationStore::AnnotationStore(std::filesystem::path path) : path_(std::move(path)) {
  std::error_code ec;
  if (!std::filesystem::exists(path_, ec)) {
    std::ofstream create(path_, std::ios::binary);
    if (!create) throw IoError("cannot create " + path_.string());
    return;
  }
  std::string text = ReadAll(path_);
  if (!text.empty() && text.back() != '\n') {
    // A write cut short by a crash leaves an unterminated tail. Keep it if it
    // parses, otherwise drop it so later appends start on a clean line.
    const std::size_t cut = text.find_last_of('\n') == std::string::npos
                                ? 0
                                : text.find_last_of('\n') + 1;
    bool complete = true;
    try {
      AnnotationFromJson(nlohmann::json::parse(text.substr(cut)));
    } catch (const std::exception&) {
      complete = false;
    }
    if (complete) {
      std::ofstream fix(path_, std::ios::binary | std::ios::app);
      fix << '\n';
      text += '\n';
    } else {
      std::filesystem::resize_file(path_, cut, ec);
      if (ec) throw IoError("cannot truncate " + path_.string() + ": " + ec.message());
      text.resize(cut);
    }
  }
  annotations_ = ParseStoreText(text, path_.filename().string());
  for (const Annotation& a : annotations_) keys_.emplace(a.example_id, a.annotator);
}

std::vector<Annotation> AnnotationStore::All() const {
  std::lock_guard lock(mu_);
  return annotations_;
}

bool AnnotationStore::Contains(std::string_view example_id, std::string_view annotator) const {
  std::lock_guard lock(mu_);
  return keys_.contains({std::string(example_id), std::string(annotator)});
}

std::set<std::string> AnnotationStore::AnnotatedIds(
    std::optional<std::string_view> annotator) const {
  std::lock_guard lock(mu_);
  std::set<std::string> out;
  for (const auto& [id, who] : keys_) {
    if (!annotator || who == *annotator) out.insert(id);
  }
  return out;
}

void AnnotationStore::Append(const Annotation& annotation) {
  std::lock_guard lock(mu_);
  if (keys_.contains({annotation.example_id, annotation.annotator})) {
    throw DuplicateAnnotationError("annotator " + annotation.annotator +
                                   " already annotated " + annotation.example_id);
  }
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to " + path_.string());
  out << AnnotationToJson(annotation).dump() << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path_.string());
  annotations_.push_back(annotation);
  keys_.emplace(annotation.example_id, annotation.annotator);
}

namespace {

// Majority payload; ties go to the payload seen earliest by timestamp, then by
// store order.
const Annotation& Adjudicate(const std::vector<const Annotation*>& votes) {
  struct Tally {
    std::size_t count = 0;
    std::int64_t earliest = 0;
    std::size_t first_seen = 0;
    const Annotation* representative = nullptr;
  };
  std::map<std::pair<std::vector<std::size_t>, std::size_t>, Tally> tallies;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    const Annotation& a = *votes[i];
    Tally& t = tallies[{a.sentences, a.option}];
    if (t.count == 0 || a.timestamp < t.earliest) {
      t.earliest = a.timestamp;
    }
    if (t.count == 0) {
      t.first_seen = i;
      t.representative = &a;
    }
    ++t.count;
  }
  const Tally* best = nullptr;
  for (const auto& [payload, t] : tallies) {
    if (best == nullptr || t.count > best->count ||
        (t.count == best->count &&
         (t.earliest < best->earliest ||
          (t.earliest == best->earliest && t.first_seen < best->first_seen)))) {
      best = &t;
    }
  }
  return *best->representative;
}

std::string JoinIndices(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

ApplyOutcome ApplyAnnotations(const Dataset& dataset, std::span<const Annotation> annotations,
                              AnnotationKind kind, bool allow_missing) {
  std::map<std::string, std::vector<const Annotation*>, std::less<>> by_id;
  for (const Example& ex : dataset.examples) by_id[ex.id];
  for (const Annotation& a : annotations) {
    if (a.kind != kind) continue;
    auto it = by_id.find(a.example_id);
    if (it == by_id.end()) throw ValidationError("unknown example id " + a.example_id);
    it->second.push_back(&a);
  }

  ApplyOutcome outcome;
  outcome.dataset.source_tag = kind == AnnotationKind::kSentenceSelection ? "P5" : "O3(H)";
  std::vector<std::string> missing;
  for (const Example& ex : dataset.examples) {
    const auto& votes = by_id[ex.id];
    if (votes.empty()) {
      missing.push_back(ex.id);
      outcome.passed_through.push_back(ex.id);
      Example out = ex;
      out.provenance = Provenance{};
      out.provenance->transform =
          kind == AnnotationKind::kSentenceSelection ? TransformId::kP5 : TransformId::kO3;
      out.provenance->notes = kind == AnnotationKind::kSentenceSelection
                                  ? "passed through: no annotation"
                                  : "O3(H); passed through: no annotation";
      outcome.dataset.examples.push_back(std::move(out));
      continue;
    }
    const Annotation& chosen = Adjudicate(votes);
    try {
      ValidateAnnotation(chosen, ex);
    } catch (const ValidationError& e) {
      throw ValidationError("example " + ex.id + ": " + e.what());
    }
    const std::string tally = std::to_string(votes.size()) + " annotation(s)";
    if (kind == AnnotationKind::kSentenceSelection) {
      const std::vector<std::string> sentences = SentenceTexts(ex.passage);
      Example out = ex;
      out.passage.clear();
      for (std::size_t index : chosen.sentences) {
        if (!out.passage.empty()) out.passage += ' ';
        out.passage += sentences[index];
      }
      out.provenance = Provenance{};
      out.provenance->transform = TransformId::kP5;
      out.provenance->notes = "selected sentences " + JoinIndices(chosen.sentences) +
                              " from " + tally;
      outcome.dataset.examples.push_back(std::move(out));
    } else {
      SeededRng unused(0);
      Example out = DropOptions(ex, ex.options.size() - 1, unused, chosen.option);
      out.provenance->seed.reset();
      out.provenance->notes = "O3(H); " + out.provenance->notes + " from " + tally;
      outcome.dataset.examples.push_back(std::move(out));
    }
  }
  if (!missing.empty() && !allow_missing) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 10; ++i) {
      list += (i ? ", " : "") + missing[i];
    }
    if (missing.size() > 10) list += ", ...";
    throw ValidationError(std::to_string(missing.size()) +
                          " example(s) have no annotation: " + list);
  }
  return outcome;
}

}  // namespace narc
