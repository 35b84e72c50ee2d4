// Copyright 2026 The factgen Authors.
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

#ifndef FACTGEN_TESTS_ORACLES_NN_ORACLE_H_
#define FACTGEN_TESTS_ORACLES_NN_ORACLE_H_

// Loop-based re-implementations of the GRU and attention equations, plus a
// central-difference gradient checker. Deliberately avoids Eigen
// expressions so it shares no code path with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "factgen/seq2seq.h"

namespace factgen::oracle {

inline std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
  std::vector<double> y(static_cast<size_t>(m.rows()), 0.0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) y[i] += m(i, j) * x[static_cast<size_t>(j)];
  }
  return y;
}

inline double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

inline std::vector<double> gru(const std::vector<double>& x, const std::vector<double>& h,
                               const GruLayer& p) {
  const size_t n = h.size();
  const auto wz = matvec(p.w_update, x), uz = matvec(p.u_update, h);
  const auto wr = matvec(p.w_reset, x), ur = matvec(p.u_reset, h);
  std::vector<double> z(n), r(n), rh(n);
  for (size_t i = 0; i < n; ++i) {
    z[i] = sigmoid(wz[i] + uz[i] + p.b_update[i]);
    r[i] = sigmoid(wr[i] + ur[i] + p.b_reset[i]);
    rh[i] = r[i] * h[i];
  }
  const auto wn = matvec(p.w_candidate, x), un = matvec(p.u_candidate, rh);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    const double cand = std::tanh(wn[i] + un[i] + p.b_candidate[i]);
    out[i] = (1.0 - z[i]) * h[i] + z[i] * cand;
  }
  return out;
}

struct OracleAttention {
  std::vector<double> context;
  std::vector<double> weights;
};

inline OracleAttention attention(const std::vector<double>& query,
                                 const std::vector<std::vector<double>>& states,
                                 const AttentionParams& p) {
  const auto shift = matvec(p.w_decoder, query);
  std::vector<double> scores;
  for (const auto& h : states) {
    const auto proj = matvec(p.w_encoder, h);
    double u = 0.0;
    for (size_t i = 0; i < proj.size(); ++i) u += p.v[i] * std::tanh(proj[i] + shift[i]);
    scores.push_back(u);
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) sum += (s = std::exp(s - top));
  OracleAttention out;
  out.context.assign(query.size(), 0.0);
  for (size_t k = 0; k < states.size(); ++k) {
    out.weights.push_back(scores[k] / sum);
    for (size_t i = 0; i < query.size(); ++i) out.context[i] += out.weights[k] * states[k][i];
  }
  return out;
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

struct GradientCheck {
  double max_relative_error = 0.0;
  std::string worst_tensor;
  size_t checked = 0;
};

// Compares analytic gradients with central differences for every scalar.
// Relative error is |a - n| / max(|a|, |n|, floor).
inline GradientCheck check_gradients(ModelParams params, const ModelParams& analytic,
                                     const std::function<double(const ModelParams&)>& loss,
                                     double step = 1e-5, double floor = 1e-6) {
  std::vector<std::span<const double>> grads;
  analytic.for_each([&grads](const std::string&, std::span<const double> g, size_t, size_t) {
    grads.push_back(g);
  });
  std::vector<std::pair<std::string, std::span<double>>> tensors;
  params.for_each([&tensors](const std::string& name, std::span<double> v, size_t, size_t) {
    tensors.emplace_back(name, v);
  });
  GradientCheck result;
  for (size_t t = 0; t < tensors.size(); ++t) {
    auto& [name, values] = tensors[t];
    for (size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + step;
      const double plus = loss(params);
      values[k] = saved - step;
      const double minus = loss(params);
      values[k] = saved;
      const double numeric = (plus - minus) / (2.0 * step);
      const double a = grads[t][k];
      const double scale = std::max({std::fabs(a), std::fabs(numeric), floor});
      const double rel = std::fabs(a - numeric) / scale;
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_tensor = name + "[" + std::to_string(k) + "]";
      }
      ++result.checked;
    }
  }
  return result;
}

}  // namespace factgen::oracle

#endif  // FACTGEN_TESTS_ORACLES_NN_ORACLE_H_
