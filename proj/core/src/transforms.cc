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

#include "narc/transforms.h"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string>
#include <utility>

#include "nlohmann/json.hpp"
#include "narc/declarative.h"
#include "narc/errors.h"
#include "narc/parallel.h"
#include "narc/sentences.h"
#include "narc/tokenizer.h"

namespace narc {

namespace {

constexpr std::size_t kNotesPassageBytes = 80;

struct Joined {
  std::string text;
  std::vector<CharRange> segments;  // one per input, empty when skipped
};

Joined JoinSegments(std::initializer_list<std::string_view> parts) {
  Joined out;
  for (std::string_view part : parts) {
    if (part.empty()) {
      out.segments.push_back({out.text.size(), out.text.size()});
      continue;
    }
    if (!out.text.empty()) out.text += ' ';
    out.segments.push_back({out.text.size(), out.text.size() + part.size()});
    out.text += part;
  }
  return out;
}

std::string Truncate(std::string_view text, std::size_t bytes) {
  if (text.size() <= bytes) return std::string(text);
  std::size_t cut = bytes;
  // Do not split a UTF-8 sequence.
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  return std::string(text.substr(0, cut)) + "...";
}

// Token span of `expected` inside `range` of the passage. The direct byte
// mapping is tried first; if the tokens there differ (e.g. a terminator was
// normalised) the last matching occurrence inside the range is used.
std::optional<Span> LocateSpan(const TokenizedText& passage, CharRange range,
                               std::string_view expected) {
  const std::vector<std::string> want = Tokenize(expected).tokens;
  if (want.empty()) return std::nullopt;
  if (auto span = TokenSpanForChars(passage, range)) {
    std::span<const std::string> got(passage.tokens.data() + span->start, span->size());
    if (TokensEqualIgnoreCase(got, want)) return span;
  }
  std::optional<Span> best;
  for (std::size_t start : FindTokenSequence(passage.tokens, want)) {
    const std::size_t end = start + want.size();
    if (passage.offsets[start].begin >= range.begin &&
        passage.offsets[end - 1].end <= range.end) {
      best = Span{start, end};
    }
  }
  return best;
}

void AppendNote(Provenance& p, std::string_view note) {
  if (!p.notes.empty()) p.notes += "; ";
  p.notes += note;
}

struct InsertedText {
  std::optional<CharRange> query;  // bytes in the new passage
  std::optional<CharRange> answer;
  std::string query_text;          // what query_span must spell out
};

void RecordSpans(Example& out, const InsertedText& inserted) {
  Provenance& p = *out.provenance;
  const TokenizedText tokens = Tokenize(out.passage);
  if (inserted.answer) {
    p.answer_span = LocateSpan(tokens, *inserted.answer, out.answer());
    if (!p.answer_span) AppendNote(p, "answer span not recoverable");
  }
  if (inserted.query) {
    p.query_span = LocateSpan(tokens, *inserted.query, inserted.query_text);
    if (!p.query_span) AppendNote(p, "query span not recoverable");
  }
}

std::string DeclarativeNote(const DeclarativeResult& d) {
  std::string note = "declarative: ";
  note += DeclarativeMethodName(d.method);
  if (d.warning) note += " (unrecognised query)";
  return note;
}

CharRange Shift(CharRange r, std::size_t by) { return {r.begin + by, r.end + by}; }

Example Begin(const Example& example, TransformId id) {
  Example out = example;
  out.provenance = Provenance{};
  out.provenance->transform = id;
  return out;
}

}  // namespace

Example AppendToPassage(const Example& example, AppendMode mode,
                        const ParseTree* parse) {
  const std::string& answer = example.answer();
  InsertedText inserted;
  Example out;
  switch (mode) {
    case AppendMode::kAnswer: {
      out = Begin(example, TransformId::kP1);
      Joined j = JoinSegments({example.passage, answer});
      out.passage = std::move(j.text);
      inserted.answer = j.segments[1];
      break;
    }
    case AppendMode::kQueryAnswer: {
      out = Begin(example, TransformId::kP2);
      Joined j = JoinSegments({example.passage, example.query, answer});
      out.passage = std::move(j.text);
      inserted.query = j.segments[1];
      inserted.query_text = example.query;
      inserted.answer = j.segments[2];
      break;
    }
    case AppendMode::kDeclarative: {
      out = Begin(example, TransformId::kP3);
      const DeclarativeResult d = ToDeclarative(example.query, answer, parse);
      Joined j = JoinSegments({example.passage, d.sentence});
      out.passage = std::move(j.text);
      inserted.query = j.segments[1];
      inserted.query_text = d.sentence;
      inserted.answer = d.answer_range ? Shift(*d.answer_range, j.segments[1].begin)
                                       : j.segments[1];
      AppendNote(*out.provenance, DeclarativeNote(d));
      break;
    }
  }
  RecordSpans(out, inserted);
  return out;
}

Example ReplacePassage(const Example& example, ReplaceMode mode,
                       const ParseTree* parse) {
  const std::string& answer = example.answer();
  InsertedText inserted;
  Example out;
  switch (mode) {
    case ReplaceMode::kQueryAnswer: {
      out = Begin(example, TransformId::kP6);
      Joined j = JoinSegments({example.query, answer});
      out.passage = std::move(j.text);
      inserted.query = j.segments[0];
      inserted.query_text = example.query;
      inserted.answer = j.segments[1];
      break;
    }
    case ReplaceMode::kDeclarative: {
      out = Begin(example, TransformId::kP7);
      const DeclarativeResult d = ToDeclarative(example.query, answer, parse);
      out.passage = d.sentence;
      inserted.query = CharRange{0, d.sentence.size()};
      inserted.query_text = d.sentence;
      inserted.answer = d.answer_range.value_or(CharRange{0, d.sentence.size()});
      AppendNote(*out.provenance, DeclarativeNote(d));
      break;
    }
    case ReplaceMode::kAnswerOnly: {
      out = Begin(example, TransformId::kP8);
      out.passage = answer;
      inserted.answer = CharRange{0, answer.size()};
      break;
    }
  }
  AppendNote(*out.provenance,
             "original passage: " + Truncate(example.passage, kNotesPassageBytes));
  RecordSpans(out, inserted);
  return out;
}

Example HintSandwich(const Example& example) {
  static constexpr std::string_view kLead = "The answer to ";
  Example out = Begin(example, TransformId::kP9);
  const std::string opening =
      std::string(kLead) + example.query + " is at the end of the passage.";
  const std::string closing =
      std::string(kLead) + example.query + " is " + example.answer() + ".";
  Joined j = JoinSegments({opening, example.passage, closing});
  out.passage = std::move(j.text);

  const std::size_t at = j.segments[2].begin + kLead.size();
  InsertedText inserted;
  inserted.query = CharRange{at, at + example.query.size()};
  inserted.query_text = example.query;
  const std::size_t answer_at = at + example.query.size() + 4;  // " is "
  inserted.answer = CharRange{answer_at, answer_at + example.answer().size()};
  RecordSpans(out, inserted);
  return out;
}

Example QueryHint(const Example& example, QueryHintMode mode) {
  Example out;
  if (mode == QueryHintMode::kAnswer) {
    out = Begin(example, TransformId::kQ1);
    out.query = example.query + " Answer is " + example.answer() + ".";
    return out;
  }
  out = Begin(example, TransformId::kQ2);
  std::string wrong;
  for (std::size_t i = 0; i < example.options.size(); ++i) {
    if (i == example.answer_index) continue;
    if (!wrong.empty()) wrong += ", ";
    wrong += example.options[i];
  }
  out.query = example.query + " Answer is not " + wrong + ".";
  return out;
}

Example OptionsDeclarative(const Example& example, const ParseTree* parse) {
  Example out = Begin(example, TransformId::kO1);
  std::string methods;
  for (std::size_t i = 0; i < example.options.size(); ++i) {
    const DeclarativeResult d = ToDeclarative(example.query, example.options[i], parse);
    out.options[i] = d.sentence;
    if (i == 0) methods = DeclarativeNote(d);
  }
  AppendNote(*out.provenance, methods);
  return out;
}

Dataset OptionsForeign(const Dataset& dataset, const SeededRng& rng) {
  const std::size_t n = dataset.examples.size();
  if (n < 2) throw ValidationError("no foreign option pool");

  // The pool is every option of every example, laid out example by example;
  // an example draws from everything outside its own block.
  std::vector<const std::string*> pool;
  std::vector<std::size_t> block_start(n), block_size(n);
  for (std::size_t e = 0; e < n; ++e) {
    block_start[e] = pool.size();
    block_size[e] = dataset.examples[e].options.size();
    for (const std::string& o : dataset.examples[e].options) pool.push_back(&o);
  }

  Dataset out;
  out.source_tag = "O2";
  out.examples.resize(n);
  ParallelFor(n, [&](std::size_t e) {
    const Example& ex = dataset.examples[e];
    SeededRng stream = rng.ForExample(ex.id);
    Example result = Begin(ex, TransformId::kO2);
    result.provenance->seed = rng.seed();

    const std::size_t foreign = pool.size() - block_size[e];
    auto at = [&](std::size_t k) -> const std::string& {
      return k < block_start[e] ? *pool[k] : *pool[k + block_size[e]];
    };
    std::vector<std::string> taken = {ToLowerAscii(ex.answer())};
    auto rejected = [&](const std::string& candidate) {
      return std::find(taken.begin(), taken.end(), ToLowerAscii(candidate)) != taken.end();
    };

    for (std::size_t i = 0; i < ex.options.size(); ++i) {
      if (i == ex.answer_index) continue;
      const std::string* pick = nullptr;
      for (int attempt = 0; attempt < 64 && pick == nullptr; ++attempt) {
        const std::string& candidate = at(stream.UniformIndex(foreign));
        if (!rejected(candidate)) pick = &candidate;
      }
      if (pick == nullptr) {
        // Many rejections: draw directly from what is still acceptable.
        std::vector<const std::string*> acceptable;
        for (std::size_t k = 0; k < foreign; ++k) {
          if (!rejected(at(k))) acceptable.push_back(&at(k));
        }
        if (acceptable.empty()) {
          throw ValidationError("example " + ex.id + ": foreign option pool exhausted");
        }
        pick = acceptable[stream.UniformIndex(acceptable.size())];
      }
      result.options[i] = *pick;
      taken.push_back(ToLowerAscii(*pick));
    }
    result.provenance->notes = "incorrect options drawn from other examples";
    out.examples[e] = std::move(result);
  });
  return out;
}

Example RemoveOptions(const Example& example, std::span<const std::size_t> drop) {
  std::vector<bool> dropped(example.options.size(), false);
  for (std::size_t index : drop) {
    if (index >= example.options.size()) {
      throw ValidationError("example " + example.id + ": option " +
                            std::to_string(index) + " does not exist");
    }
    if (index == example.answer_index) {
      throw ValidationError("example " + example.id +
                            ": cannot drop the correct option");
    }
    dropped[index] = true;
  }
  Example out = example;
  out.options.clear();
  for (std::size_t i = 0; i < example.options.size(); ++i) {
    if (i == example.answer_index) out.answer_index = out.options.size();
    if (!dropped[i]) out.options.push_back(example.options[i]);
  }
  return out;
}

Example DropOptions(const Example& example, std::size_t keep, SeededRng& stream,
                    std::optional<std::size_t> forced_drop) {
  const std::size_t n = example.options.size();
  if (keep < 2) throw ValidationError("must keep at least 2 options");
  if (keep >= n) {
    throw ValidationError("example " + example.id + ": keep " + std::to_string(keep) +
                          " is not below its " + std::to_string(n) + " options");
  }
  std::vector<std::size_t> drop;
  if (forced_drop) {
    if (*forced_drop >= n) {
      throw ValidationError("example " + example.id + ": forced drop " +
                            std::to_string(*forced_drop) + " does not exist");
    }
    if (*forced_drop == example.answer_index) {
      throw ValidationError("example " + example.id +
                            ": forced drop cannot be the correct option");
    }
    drop.push_back(*forced_drop);
  }
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != example.answer_index && (!forced_drop || i != *forced_drop)) {
      candidates.push_back(i);
    }
  }
  while (n - drop.size() > keep) {
    const std::size_t k = stream.UniformIndex(candidates.size());
    drop.push_back(candidates[k]);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(k));
  }

  Example out = RemoveOptions(example, drop);
  out.provenance = Provenance{};
  out.provenance->transform = TransformId::kO3;
  out.provenance->seed = stream.seed();
  std::string note = forced_drop ? "human-selected drop; dropped options" : "dropped options";
  for (std::size_t i = 0; i < drop.size(); ++i) {
    note += (i == 0 ? " " : ", ") + std::to_string(drop[i]);
  }
  out.provenance->notes = std::move(note);
  return out;
}

PassageMap ReadPassageSidecar(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  PassageMap map;
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
    if (!j.contains("passage") || !j["passage"].is_string()) {
      throw ValidationError(where + ": missing field passage");
    }
    map.insert_or_assign(j["id"].get<std::string>(), j["passage"].get<std::string>());
  }
  return map;
}

namespace {

std::string NormalizeWhitespace(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (IsAsciiSpace(c)) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace

bool IsSentenceSubsequence(std::string_view candidate, std::string_view original) {
  const std::vector<std::string> want = SentenceTexts(candidate);
  const std::vector<std::string> have = SentenceTexts(original);
  std::size_t h = 0;
  for (const std::string& sentence : want) {
    const std::string norm = NormalizeWhitespace(sentence);
    while (h < have.size() && NormalizeWhitespace(have[h]) != norm) ++h;
    if (h == have.size()) return false;
    ++h;
  }
  return true;
}

SidecarOutcome SidecarPassage(const Dataset& dataset, const PassageMap& sidecar,
                              TransformId transform, bool allow_missing) {
  if (transform != TransformId::kP4 && transform != TransformId::kP5) {
    throw ValidationError("sidecar passages apply to P4 and P5 only");
  }
  SidecarOutcome outcome;
  outcome.dataset.source_tag = std::string(TransformIdName(transform));
  std::vector<std::string> missing;
  for (const Example& ex : dataset.examples) {
    Example out = Begin(ex, transform);
    auto it = sidecar.find(ex.id);
    if (it == sidecar.end()) {
      missing.push_back(ex.id);
      outcome.passed_through.push_back(ex.id);
      out.provenance->notes = "passed through: no sidecar passage";
    } else {
      out.passage = it->second;
      if (transform == TransformId::kP5 && !IsSentenceSubsequence(it->second, ex.passage)) {
        outcome.warnings.push_back(ex.id +
                                   ": sidecar passage is not a subsequence of the "
                                   "original sentences");
      }
    }
    outcome.dataset.examples.push_back(std::move(out));
  }
  if (!missing.empty() && !allow_missing) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i == 10) {
        list += ", ... (" + std::to_string(missing.size() - 10) + " more)";
        break;
      }
      list += (i == 0 ? "" : ", ") + missing[i];
    }
    throw ValidationError("sidecar has no passage for " + std::to_string(missing.size()) +
                          " example(s): " + list);
  }
  return outcome;
}

TransformOutcome ApplyTransform(const Dataset& dataset, const TransformOptions& options) {
  TransformOutcome outcome;
  const TransformId op = options.op;
  auto parse_for = [&](const Example& ex) -> const ParseTree* {
    if (options.parses == nullptr) return nullptr;
    auto it = options.parses->find(ex.id);
    return it == options.parses->end() ? nullptr : &it->second;
  };

  switch (op) {
    case TransformId::kO2:
      outcome.dataset = OptionsForeign(dataset, SeededRng(options.seed));
      return outcome;
    case TransformId::kP4:
    case TransformId::kP5: {
      if (options.sidecar == nullptr) {
        throw ValidationError(std::string(TransformIdName(op)) + " needs a sidecar file");
      }
      SidecarOutcome s = SidecarPassage(dataset, *options.sidecar, op, options.allow_missing);
      outcome.dataset = std::move(s.dataset);
      outcome.passed_through = std::move(s.passed_through);
      outcome.warnings = std::move(s.warnings);
      return outcome;
    }
    case TransformId::kO3:
      if (!options.keep) throw ValidationError("O3 needs --keep");
      if (*options.keep < 2) throw ValidationError("must keep at least 2 options");
      break;
    default:
      break;
  }

  const SeededRng rng(options.seed);
  std::vector<Example> out(dataset.examples.size());
  ParallelFor(out.size(), [&](std::size_t i) {
    const Example& ex = dataset.examples[i];
    switch (op) {
      case TransformId::kP1: out[i] = AppendToPassage(ex, AppendMode::kAnswer); break;
      case TransformId::kP2: out[i] = AppendToPassage(ex, AppendMode::kQueryAnswer); break;
      case TransformId::kP3:
        out[i] = AppendToPassage(ex, AppendMode::kDeclarative, parse_for(ex));
        break;
      case TransformId::kP6: out[i] = ReplacePassage(ex, ReplaceMode::kQueryAnswer); break;
      case TransformId::kP7:
        out[i] = ReplacePassage(ex, ReplaceMode::kDeclarative, parse_for(ex));
        break;
      case TransformId::kP8: out[i] = ReplacePassage(ex, ReplaceMode::kAnswerOnly); break;
      case TransformId::kP9: out[i] = HintSandwich(ex); break;
      case TransformId::kQ1: out[i] = QueryHint(ex, QueryHintMode::kAnswer); break;
      case TransformId::kQ2: out[i] = QueryHint(ex, QueryHintMode::kNotAnswer); break;
      case TransformId::kO1: out[i] = OptionsDeclarative(ex, parse_for(ex)); break;
      case TransformId::kO3: {
        SeededRng stream = rng.ForExample(ex.id);
        out[i] = DropOptions(ex, *options.keep, stream);
        break;
      }
      default:
        throw ValidationError("unsupported transform");
    }
  });
  outcome.dataset.examples = std::move(out);
  outcome.dataset.source_tag = std::string(TransformIdName(op));
  return outcome;
}

}  // namespace narc
