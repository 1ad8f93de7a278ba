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

#include "oracle.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <regex>
#include <stdexcept>

namespace narc::oracle {

namespace {

// Pinned independently of the library constant.
constexpr double kTie = 1e-12;

bool Above(double a, double b) { return a - b > kTie * std::fmax(std::fabs(a), std::fabs(b)); }

std::wstring Decode(const std::string& s, std::vector<std::size_t>& byte_at) {
  std::wstring out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
    std::uint32_t cp = len == 1 ? c : len == 2 ? c & 0x1F : len == 3 ? c & 0x0F : c & 0x07;
    for (std::size_t k = 1; k < len; ++k) {
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    byte_at.push_back(i);
    out.push_back(static_cast<wchar_t>(cp));
    i += len;
  }
  byte_at.push_back(s.size());
  return out;
}

}  // namespace

std::vector<Token> RegexTokenize(const std::string& text) {
  // Letters exclude U+2010..U+2027; U+2019 acts as an apostrophe.
  static const std::wregex kToken(
      L"[\x2010-\x2018\x201A-\x2027]"
      L"|['\x2019][A-Za-z\x80-\x200F\x2028-\x10FFFF]*"
      L"|[A-Za-z0-9\x80-\x200F\x2028-\x10FFFF]+"
      L"|[^ \t\n\r\f\v]");
  std::vector<std::size_t> byte_at;
  const std::wstring wide = Decode(text, byte_at);
  std::vector<Token> out;
  for (auto it = std::wsregex_iterator(wide.begin(), wide.end(), kToken);
       it != std::wsregex_iterator(); ++it) {
    const std::size_t b = static_cast<std::size_t>(it->position());
    const std::size_t e = b + static_cast<std::size_t>(it->length());
    out.push_back({text.substr(byte_at[b], byte_at[e] - byte_at[b]), byte_at[b], byte_at[e]});
  }
  return out;
}

bool BelowUniform(const std::vector<double>& alpha, std::size_t start, std::size_t len) {
  const double mass = std::accumulate(alpha.begin() + static_cast<std::ptrdiff_t>(start),
                                      alpha.begin() + static_cast<std::ptrdiff_t>(start + len), 0.0);
  const double uniform = static_cast<double>(len) / static_cast<double>(alpha.size());
  return Above(uniform, mass);
}

namespace {

double RankOf(const std::vector<double>& scores, std::size_t lo,
              const std::vector<std::size_t>& targets) {
  std::size_t best = SIZE_MAX;
  for (std::size_t t : targets) {
    std::size_t above = 0;
    for (std::size_t j = lo; j < scores.size(); ++j) above += Above(scores[j], scores[t]) ? 1 : 0;
    best = std::min(best, above + 1);
  }
  return 1.0 / static_cast<double>(best);
}

}  // namespace

double OutputMrr(const std::vector<double>& alpha, std::size_t len,
                 const std::vector<std::size_t>& targets) {
  std::vector<double> scores;
  for (std::size_t i = 0; i + len <= alpha.size(); ++i) {
    scores.push_back(std::accumulate(alpha.begin() + static_cast<std::ptrdiff_t>(i),
                                     alpha.begin() + static_cast<std::ptrdiff_t>(i + len), 0.0));
  }
  return RankOf(scores, 0, targets);
}

double AffinityMrr(const Matrix& m, std::size_t len, const std::vector<std::size_t>& targets) {
  std::vector<double> scores;
  for (std::size_t i = 0; i + len <= m.rows; ++i) {
    double sq = 0.0;
    for (std::size_t r = i; r < i + len; ++r) {
      for (std::size_t c = 0; c < m.cols; ++c) sq += m(r, c) * m(r, c);
    }
    scores.push_back(std::sqrt(sq));
  }
  return RankOf(scores, 0, targets);
}

double SelfMrr(const Matrix& m, std::size_t n, std::size_t last_start, std::size_t k) {
  if (n == 0 || k + n > m.rows) throw std::invalid_argument("no window");
  std::vector<double> scores(m.rows - k + 1, 0.0);
  for (std::size_t i = n; i + k <= m.rows; ++i) {
    double sq = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = i; c < i + k; ++c) sq += m(r, c) * m(r, c);
    }
    scores[i] = std::sqrt(sq);
  }
  return RankOf(scores, n, {last_start});
}

double RelativeImprovement(double accuracy, int n_options) {
  return accuracy * n_options - 1.0;
}

}  // namespace narc::oracle
