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

#ifndef FACTGEN_SEQ2SEQ_H_
#define FACTGEN_SEQ2SEQ_H_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "factgen/corpus.h"
#include "factgen/vocabulary.h"

namespace factgen {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct Hyperparams {
  size_t vocab_size = 0;
  size_t embed_dim = 256;
  size_t hidden_dim = 256;
  size_t layers = 3;
  size_t batch_size = 64;
  double learning_rate = 0.5;
  size_t max_decode_len = 40;
  // Weight of the reconstruction loss; 0 gives the plain seq2seq objective.
  double ae_weight = 1.0;
  double clip_norm = 5.0;
  uint64_t seed = 1;
  bool backward_attention = true;

  // Throws std::invalid_argument.
  void validate() const;
};

// z = sig(Wz x + Uz h + bz), r = sig(Wr x + Ur h + br),
// n = tanh(Wn x + Un (r*h) + bn), h' = (1-z)*h + z*n.
struct GruLayer {
  Matrix w_update, u_update, w_reset, u_reset, w_candidate, u_candidate;
  Vector b_update, b_reset, b_candidate;

  static GruLayer zeros(size_t input_dim, size_t hidden_dim);
};

// Additive attention: u_i = v . tanh(W_enc h_i + W_dec q), a = softmax(u).
struct AttentionParams {
  Matrix w_encoder, w_decoder;
  Vector v;
};

// One recurrent encoder-decoder. The decoder's first layer reads the token
// embedding concatenated with the attention context.
struct DirectionParams {
  std::vector<GruLayer> encoder;
  std::vector<GruLayer> decoder;
  AttentionParams attention;
  Matrix output_w;  // V x h
  Vector output_b;
  bool attention_enabled = true;
};

enum class Direction { kForward, kBackward };

// The forward (facts -> text) and backward (text -> facts) networks. Only
// the embedding table is shared.
struct ModelParams {
  Matrix embedding;  // V x d
  DirectionParams forward;
  DirectionParams backward;

  static ModelParams zeros(const Hyperparams& hp);
  // Weights uniform in (-0.08, 0.08), biases zero.
  static ModelParams initialize(const Hyperparams& hp);
  static ModelParams zeros_like(const ModelParams& other);

  DirectionParams& direction(Direction d) { return d == Direction::kForward ? forward : backward; }
  const DirectionParams& direction(Direction d) const {
    return d == Direction::kForward ? forward : backward;
  }

  // f(name, values, rows, cols) for every tensor in a fixed order; values
  // are row-major.
  template <typename F>
  void for_each(F&& f) {
    visit(*this, f);
  }
  template <typename F>
  void for_each(F&& f) const {
    visit(*this, f);
  }

  size_t parameter_count() const;
  double squared_norm() const;
  bool all_finite() const;
  // this += scale * other; shapes must match.
  void add_scaled(const ModelParams& other, double scale);

 private:
  template <typename Self, typename F>
  static void visit(Self& self, F& f) {
    auto tensor = [&f](const std::string& name, auto& t) {
      f(name, std::span(t.data(), static_cast<size_t>(t.size())), static_cast<size_t>(t.rows()),
        static_cast<size_t>(t.cols()));
    };
    auto stack = [&tensor](const std::string& prefix, auto& layers) {
      for (size_t l = 0; l < layers.size(); ++l) {
        const std::string p = prefix + "." + std::to_string(l) + ".";
        auto& layer = layers[l];
        tensor(p + "w_update", layer.w_update);
        tensor(p + "u_update", layer.u_update);
        tensor(p + "b_update", layer.b_update);
        tensor(p + "w_reset", layer.w_reset);
        tensor(p + "u_reset", layer.u_reset);
        tensor(p + "b_reset", layer.b_reset);
        tensor(p + "w_candidate", layer.w_candidate);
        tensor(p + "u_candidate", layer.u_candidate);
        tensor(p + "b_candidate", layer.b_candidate);
      }
    };
    auto direction = [&](const std::string& name, auto& d) {
      stack(name + ".encoder", d.encoder);
      stack(name + ".decoder", d.decoder);
      tensor(name + ".attention.w_encoder", d.attention.w_encoder);
      tensor(name + ".attention.w_decoder", d.attention.w_decoder);
      tensor(name + ".attention.v", d.attention.v);
      tensor(name + ".output.w", d.output_w);
      tensor(name + ".output.b", d.output_b);
    };
    tensor(std::string("embedding"), self.embedding);
    direction("forward", self.forward);
    direction("backward", self.backward);
  }
};

// One GRU step. Throws NumericError on non-finite input.
Vector gru_cell(const Vector& x, const Vector& h_prev, const GruLayer& layer);

struct EncoderOutput {
  Matrix states;              // one top-layer state per input position (rows)
  std::vector<Vector> final;  // last state of every layer
};

// Zero initial states, embeddings from the shared table. Throws DataError on
// empty input or out-of-range ids.
EncoderOutput encode(std::span<const int32_t> ids, const ModelParams& params,
                     Direction direction = Direction::kForward);

struct AttentionResult {
  Vector context;
  Vector weights;
};

// `states` holds one encoder state per row and must be nonempty.
AttentionResult attend(const Vector& query, const Matrix& states, const AttentionParams& params);

struct DecoderState {
  std::vector<Vector> layers;
};

// Encoder final states, or zeros when the encoder saw no input.
DecoderState initial_decoder_state(const EncoderOutput& encoder, const ModelParams& params,
                                   Direction direction = Direction::kForward);

// Attends with the current top state, advances the stack on
// [embedding(prev_id); context] and returns softmax(W_out top + b).
Vector decode_distribution(int32_t prev_id, DecoderState& state, const EncoderOutput& encoder,
                           const ModelParams& params, Direction direction = Direction::kForward);

// Argmax decoding from <go>; ties go to the lowest id. Stops at <eos>
// (excluded) or after max_len tokens.
std::vector<int32_t> greedy_decode(std::span<const int32_t> input, const ModelParams& params,
                                   size_t max_len, Direction direction = Direction::kForward);

// Mean per-token negative log-likelihood of `target` (which ends in <eos>)
// under teacher forcing with the forward network.
double teacher_forced_loss(std::span<const int32_t> input, std::span<const int32_t> target,
                           const ModelParams& params);

// Mean NLL of reconstructing `input` followed by <eos> from `decoded` with
// the backward network. An empty `decoded` is scored with a zero-initialized
// decoder and no attention.
double reconstruction_loss(std::span<const int32_t> decoded, std::span<const int32_t> input,
                           const ModelParams& params);

struct Example {
  std::vector<int32_t> input;
  std::vector<int32_t> target;  // ends with <eos>
};

// Delexicalizes the title, linearizes facts and maps both sides to ids.
Example make_example(const BiographyInstance& instance, const Vocabulary& vocab);

struct LossBreakdown {
  double forward_loss = 0.0;
  double reconstruction_loss = 0.0;
  double total = 0.0;
  // Batch items whose greedy decode was empty.
  size_t empty_decodes = 0;
};

// forward_loss and reconstruction_loss are token-level means over the batch;
// total = forward + ae_weight * reconstruction. The reconstruction term is
// skipped when ae_weight is 0. When `grads` is given, d(total)/d(params) is
// added to it; greedy decodes are constants. `decodes` overrides the greedy
// decode per example (used to hold them fixed).
LossBreakdown batch_loss(std::span<const Example> batch, const ModelParams& params,
                         const Hyperparams& hp, ModelParams* grads = nullptr,
                         const std::vector<std::vector<int32_t>>* decodes = nullptr);

// One SGD step with global-norm clipping. Throws NumericError (leaving
// params untouched) when the loss or gradient is non-finite.
LossBreakdown train_step(std::span<const Example> batch, ModelParams& params,
                         const Hyperparams& hp);

// Forward network only: delexicalize, linearize, decode, relexicalize.
Tokens generate(const FactRecord& record, const ModelParams& params, const Vocabulary& vocab,
                const Hyperparams& hp);

}  // namespace factgen

#endif  // FACTGEN_SEQ2SEQ_H_
