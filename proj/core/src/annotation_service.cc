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

#include <algorithm>
#include <ctime>
#include <map>

#include "httplib.h"
#include "narc/annotation.h"
#include "narc/errors.h"
#include "narc/sentences.h"

namespace narc {

namespace {

constexpr char kJson[] = "application/json";

constexpr char kFallbackPage[] = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>narc annotation</title></head>
<body>
<p>The annotation API is running. Endpoints:</p>
<ul>
<li>GET /api/next?annotator=NAME</li>
<li>GET /api/example/ID</li>
<li>POST /api/annotation</li>
<li>GET /api/progress[?annotator=NAME]</li>
</ul>
<p>Start the server with --static-dir to serve the annotation UI here.</p>
</body></html>
)";

void Reply(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void Fail(httplib::Response& res, int status, const std::string& message,
          const std::string& field = {}) {
  nlohmann::ordered_json body;
  body["error"] = message;
  if (!field.empty()) body["field"] = field;
  Reply(res, status, body);
}

}  // namespace

class AnnotationService::Impl {
 public:
  Impl(Dataset dataset, AnnotationKind kind, std::filesystem::path store_path, Options options)
      : dataset_(std::move(dataset)),
        kind_(kind),
        store_(std::move(store_path)),
        options_(std::move(options)) {
    for (const Example& ex : dataset_.examples) by_id_.emplace(ex.id, &ex);
    Route();
  }

  int Bind(const std::string& host, int port) {
    if (port == 0) {
      const int bound = server_.bind_to_any_port(host);
      if (bound < 0) throw IoError("cannot bind " + host);
      return bound;
    }
    if (!server_.bind_to_port(host, port)) {
      throw IoError("cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
  }

  void Run() { server_.listen_after_bind(); }
  void Stop() { server_.stop(); }
  void WaitUntilReady() const { server_.wait_until_ready(); }

 private:
  std::string_view TaskName() const {
    return kind_ == AnnotationKind::kSentenceSelection ? "p5" : "o3h";
  }

  nlohmann::ordered_json ExampleJson(const Example& ex) const {
    nlohmann::ordered_json j;
    j["id"] = ex.id;
    j["task"] = TaskName();
    j["passage"] = ex.passage;
    j["query"] = ex.query;
    j["options"] = ex.options;
    j["answer_index"] = ex.answer_index;
    j["answer"] = ex.answer();
    if (kind_ == AnnotationKind::kSentenceSelection) j["sentences"] = SentenceTexts(ex.passage);
    return j;
  }

  std::size_t Done(std::optional<std::string_view> annotator) const {
    std::size_t done = 0;
    for (const std::string& id : store_.AnnotatedIds(annotator)) done += by_id_.count(id);
    return done;
  }

  void Route() {
    if (options_.static_dir) {
      if (!server_.set_mount_point("/", options_.static_dir->string())) {
        throw IoError("static directory not found: " + options_.static_dir->string());
      }
    } else {
      server_.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kFallbackPage, "text/html; charset=utf-8");
      });
    }

    server_.Get("/api/next", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string annotator = req.get_param_value("annotator");
      if (annotator.empty()) return Fail(res, 400, "annotator is required", "annotator");
      const std::set<std::string> done = store_.AnnotatedIds(annotator);
      // by_id_ iterates in id order, so this is the lowest pending id.
      for (const auto& [id, ex] : by_id_) {
        if (!done.contains(id)) return Reply(res, 200, ExampleJson(*ex));
      }
      res.status = 204;
    });

    server_.Get(R"(/api/example/(.+))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  auto it = by_id_.find(req.matches[1].str());
                  if (it == by_id_.end()) return Fail(res, 404, "unknown example id", "id");
                  Reply(res, 200, ExampleJson(*it->second));
                });

    server_.Get("/api/progress", [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::string> annotator;
      if (req.has_param("annotator")) annotator = req.get_param_value("annotator");
      nlohmann::ordered_json body;
      body["total"] = by_id_.size();
      body["done"] = Done(annotator ? std::optional<std::string_view>(*annotator) : std::nullopt);
      Reply(res, 200, body);
    });

    server_.Post("/api/annotation", [this](const httplib::Request& req, httplib::Response& res) {
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::parse_error&) {
        return Fail(res, 400, "body is not valid JSON");
      }
      try {
        Annotation a = AnnotationFromJson(body, static_cast<std::int64_t>(std::time(nullptr)));
        if (a.kind != kind_) {
          return Fail(res, 400,
                      "this server collects " + std::string(AnnotationKindName(kind_)) +
                          " annotations",
                      "kind");
        }
        auto it = by_id_.find(a.example_id);
        if (it == by_id_.end()) return Fail(res, 404, "unknown example id", "example_id");
        ValidateAnnotation(a, *it->second);
        store_.Append(a);
        Reply(res, 201, AnnotationToJson(a));
      } catch (const AnnotationFieldError& e) {
        Fail(res, 400, e.what(), e.field());
      } catch (const DuplicateAnnotationError& e) {
        Fail(res, 409, e.what());
      } catch (const IoError& e) {
        Fail(res, 500, e.what());
      } catch (const ValidationError& e) {
        Fail(res, 400, e.what());
      }
    });
  }

  Dataset dataset_;
  AnnotationKind kind_;
  AnnotationStore store_;
  Options options_;
  std::map<std::string, const Example*, std::less<>> by_id_;
  httplib::Server server_;
};

AnnotationService::AnnotationService(Dataset dataset, AnnotationKind kind,
                                     std::filesystem::path store_path, Options options)
    : impl_(std::make_unique<Impl>(std::move(dataset), kind, std::move(store_path),
                                   std::move(options))) {}

AnnotationService::AnnotationService(Dataset dataset, AnnotationKind kind,
                                     std::filesystem::path store_path)
    : AnnotationService(std::move(dataset), kind, std::move(store_path), Options{}) {}

AnnotationService::~AnnotationService() = default;

int AnnotationService::Bind(const std::string& host, int port) { return impl_->Bind(host, port); }
void AnnotationService::Run() { impl_->Run(); }
void AnnotationService::Stop() { impl_->Stop(); }
void AnnotationService::WaitUntilReady() const { impl_->WaitUntilReady(); }

}  // namespace narc
