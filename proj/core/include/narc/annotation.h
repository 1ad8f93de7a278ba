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

#ifndef NARC_ANNOTATION_H_
#define NARC_ANNOTATION_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlohmann/json.hpp"
#include "narc/errors.h"
#include "narc/example.h"

namespace narc {

// A rejected annotation body; field() names the offending member.
class AnnotationFieldError : public ValidationError {
 public:
  AnnotationFieldError(std::string field, const std::string& message)
      : ValidationError(message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class DuplicateAnnotationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class AnnotationKind {
  kSentenceSelection,  // P5: which sentences are needed to answer
  kConfusingOption,    // O3(H): the most confusing incorrect option
};

std::string_view AnnotationKindName(AnnotationKind kind);
std::optional<AnnotationKind> ParseAnnotationKind(std::string_view name);
// CLI task names: "p5" and "o3h".
std::optional<AnnotationKind> ParseTaskName(std::string_view name);

struct Annotation {
  std::string example_id;
  std::string annotator;
  AnnotationKind kind = AnnotationKind::kSentenceSelection;
  std::vector<std::size_t> sentences;  // kSentenceSelection
  std::size_t option = 0;              // kConfusingOption
  std::int64_t timestamp = 0;          // UTC seconds

  bool operator==(const Annotation&) const = default;
};

nlohmann::ordered_json AnnotationToJson(const Annotation& annotation);

// Throws ValidationError naming the offending field. A missing timestamp is
// filled with `default_timestamp`.
Annotation AnnotationFromJson(const nlohmann::json& body,
                              std::int64_t default_timestamp = 0);

// Checks the payload against the example: sentence indices non-empty,
// strictly increasing and below the sentence count; a confusing option that
// exists and is not the correct one ("cannot mark the correct option").
void ValidateAnnotation(const Annotation& annotation, const Example& example);

// Append-only JSONL store of annotations. Appends are serialized and flushed
// line by line, so a crash loses at most the annotation in flight.
class AnnotationStore {
 public:
  // Loads existing lines; creates the file when it does not exist.
  explicit AnnotationStore(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }

  std::vector<Annotation> All() const;
  bool Contains(std::string_view example_id, std::string_view annotator) const;
  // Ids with at least one annotation; restricted to one annotator if given.
  std::set<std::string> AnnotatedIds(std::optional<std::string_view> annotator) const;

  // Throws DuplicateAnnotationError on a repeated (example_id, annotator).
  void Append(const Annotation& annotation);

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::vector<Annotation> annotations_;
  std::set<std::pair<std::string, std::string>> keys_;
};

std::vector<Annotation> ReadAnnotations(const std::filesystem::path& path);

struct ApplyOutcome {
  Dataset dataset;
  std::vector<std::string> passed_through;
};

// Aggregates annotations per example (majority payload, ties broken by the
// earliest timestamp) and applies them: P5 keeps the selected sentences,
// joined by one space in original order; O3(H) drops the chosen option via
// DropOptions. Throws ValidationError for annotations of unknown ids or, unless
// allow_missing, for unannotated examples.
ApplyOutcome ApplyAnnotations(const Dataset& dataset,
                              std::span<const Annotation> annotations,
                              AnnotationKind kind, bool allow_missing);

// HTTP/1.1 JSON service for annotators:
//   GET  /api/next?annotator=NAME  lowest-id example NAME has not annotated,
//                                  204 when none is left
//   GET  /api/example/{id}
//   POST /api/annotation           201, 400 (invalid), 404 (unknown id),
//                                  409 (duplicate for the annotator)
//   GET  /api/progress[?annotator=NAME]   {"total": .., "done": ..}
//   GET  /                         annotation UI (static files)
class AnnotationService {
 public:
  struct Options {
    std::optional<std::filesystem::path> static_dir;
  };

  AnnotationService(Dataset dataset, AnnotationKind kind,
                    std::filesystem::path store_path, Options options);
  AnnotationService(Dataset dataset, AnnotationKind kind,
                    std::filesystem::path store_path);
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  // Binds; port 0 picks a free port. Returns the bound port or throws IoError.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); call after Bind.
  void Run();
  void Stop();
  void WaitUntilReady() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace narc

#endif  // NARC_ANNOTATION_H_
