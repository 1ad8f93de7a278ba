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

// Reference implementations used only by tests. They are written from the
// metric definitions directly and share no code with the library beyond the
// plain data types.

#ifndef NARC_TESTS_ORACLE_ORACLE_H_
#define NARC_TESTS_ORACLE_ORACLE_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace narc::oracle {

struct Token {
  std::string text;
  std::size_t begin = 0;  // byte offsets
  std::size_t end = 0;
};

// Regex tokenizer over decoded code points. Valid UTF-8 only.
std::vector<Token> RegexTokenize(const std::string& text);

// Row-major matrix with explicit dimensions.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;
  double operator()(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
};

bool BelowUniform(const std::vector<double>& alpha, std::size_t start, std::size_t len);

// Reciprocal rank of the best of `targets` among all windows of length `len`.
double OutputMrr(const std::vector<double>& alpha, std::size_t len,
                 const std::vector<std::size_t>& targets);
double AffinityMrr(const Matrix& m, std::size_t len, const std::vector<std::size_t>& targets);
double SelfMrr(const Matrix& m, std::size_t n, std::size_t last_start, std::size_t k);

double RelativeImprovement(double accuracy, int n_options);

}  // namespace narc::oracle

#endif  // NARC_TESTS_ORACLE_ORACLE_H_
