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

#include "factgen/seq2seq.h"

#include <cmath>
#include <stdexcept>

#include "factgen/error.h"
#include "factgen/rng.h"

namespace factgen {
namespace {

constexpr double kInitRange = 0.08;

Vector sigmoid(const Vector& a) { return (1.0 + (-a.array()).exp()).inverse().matrix(); }

// Everything the backward pass needs from one GRU step.
struct GruCache {
  Vector x, h_prev, z, r, n, h;
};

GruCache gru_forward(const GruLayer& p, const Vector& x, const Vector& h_prev) {
  GruCache c;
  c.x = x;
  c.h_prev = h_prev;
  c.z = sigmoid(p.w_update * x + p.u_update * h_prev + p.b_update);
  c.r = sigmoid(p.w_reset * x + p.u_reset * h_prev + p.b_reset);
  const Vector gated = c.r.cwiseProduct(h_prev);
  c.n = (p.w_candidate * x + p.u_candidate * gated + p.b_candidate).array().tanh().matrix();
  c.h = h_prev + c.z.cwiseProduct(c.n - h_prev);
  return c;
}

// Accumulates parameter gradients into `g`; writes input and previous-state
// gradients.
void gru_backward(const GruLayer& p, const GruCache& c, const Vector& dh, GruLayer& g, Vector& dx,
                  Vector& dh_prev) {
  const Vector dz = dh.cwiseProduct(c.n - c.h_prev);
  const Vector dn = dh.cwiseProduct(c.z);
  dh_prev = dh - dh.cwiseProduct(c.z);

  const Vector dan = dn.cwiseProduct((1.0 - c.n.array().square()).matrix());
  const Vector gated = c.r.cwiseProduct(c.h_prev);
  g.w_candidate.noalias() += dan * c.x.transpose();
  g.u_candidate.noalias() += dan * gated.transpose();
  g.b_candidate += dan;
  dx.noalias() = p.w_candidate.transpose() * dan;
  const Vector dgated = p.u_candidate.transpose() * dan;
  dh_prev += dgated.cwiseProduct(c.r);

  const Vector dar = dgated.cwiseProduct(c.h_prev).cwiseProduct(c.r).cwiseProduct(
      (1.0 - c.r.array()).matrix());
  g.w_reset.noalias() += dar * c.x.transpose();
  g.u_reset.noalias() += dar * c.h_prev.transpose();
  g.b_reset += dar;
  dx.noalias() += p.w_reset.transpose() * dar;
  dh_prev.noalias() += p.u_reset.transpose() * dar;

  const Vector daz = dz.cwiseProduct(c.z).cwiseProduct((1.0 - c.z.array()).matrix());
  g.w_update.noalias() += daz * c.x.transpose();
  g.u_update.noalias() += daz * c.h_prev.transpose();
  g.b_update += daz;
  dx.noalias() += p.w_update.transpose() * daz;
  dh_prev.noalias() += p.u_update.transpose() * daz;
}

size_t hidden_dim_of(const DirectionParams& p) {
  return static_cast<size_t>(p.output_w.cols());
}

size_t vocab_of(const ModelParams& params) { return static_cast<size_t>(params.embedding.rows()); }

void check_ids(std::span<const int32_t> ids, size_t vocab_size) {
  for (int32_t id : ids) {
    if (id < 0 || static_cast<size_t>(id) >= vocab_size) {
      throw DataError("token id " + std::to_string(id) + " outside vocabulary of size " +
                      std::to_string(vocab_size));
    }
  }
}

struct EncoderTrace {
  EncoderOutput output;
  std::vector<std::vector<GruCache>> steps;  // [position][layer]
};

EncoderTrace run_encoder(std::span<const int32_t> ids, const Matrix& embedding,
                         const DirectionParams& p) {
  const size_t layers = p.encoder.size();
  const size_t hidden = hidden_dim_of(p);
  EncoderTrace trace;
  trace.output.states.resize(static_cast<Eigen::Index>(ids.size()),
                             static_cast<Eigen::Index>(hidden));
  trace.output.final.assign(layers, Vector::Zero(static_cast<Eigen::Index>(hidden)));
  trace.steps.resize(ids.size());
  for (size_t t = 0; t < ids.size(); ++t) {
    Vector input = embedding.row(ids[t]).transpose();
    trace.steps[t].reserve(layers);
    for (size_t l = 0; l < layers; ++l) {
      trace.steps[t].push_back(gru_forward(p.encoder[l], input, trace.output.final[l]));
      trace.output.final[l] = trace.steps[t].back().h;
      input = trace.output.final[l];
    }
    trace.output.states.row(static_cast<Eigen::Index>(t)) = input.transpose();
  }
  return trace;
}

struct AttentionCache {
  Vector query;
  Vector weights;
  Matrix activations;  // tanh(W_enc h_i + W_dec q), one row per position
};

// `projected` is states * W_enc^T.
Vector attention_forward(const AttentionParams& p, const Matrix& states, const Matrix& projected,
                         const Vector& query, AttentionCache* cache) {
  const Vector shift = p.w_decoder * query;
  Matrix activations = (projected.rowwise() + shift.transpose()).array().tanh().matrix();
  Vector scores = activations * p.v;
  Vector weights = (scores.array() - scores.maxCoeff()).exp().matrix();
  weights /= weights.sum();
  Vector context = states.transpose() * weights;
  if (cache != nullptr) {
    cache->query = query;
    cache->weights = std::move(weights);
    cache->activations = std::move(activations);
  }
  return context;
}

void attention_backward(const AttentionParams& p, const AttentionCache& c, const Matrix& states,
                        const Vector& dcontext, AttentionParams& g, Matrix& dstates,
                        Vector& dquery) {
  const Vector dweights = states * dcontext;
  dstates.noalias() += c.weights * dcontext.transpose();
  const Vector dscores = c.weights.cwiseProduct(
      (dweights.array() - c.weights.dot(dweights)).matrix());
  g.v.noalias() += c.activations.transpose() * dscores;
  const Matrix dpre =
      ((dscores * p.v.transpose()).array() * (1.0 - c.activations.array().square())).matrix();
  g.w_encoder.noalias() += dpre.transpose() * states;
  const Vector dpre_sum = dpre.colwise().sum().transpose();
  g.w_decoder.noalias() += dpre_sum * c.query.transpose();
  dstates.noalias() += dpre * p.w_encoder;
  dquery.noalias() = p.w_decoder.transpose() * dpre_sum;
}

struct StepTrace {
  bool attended = false;
  AttentionCache attention;
  std::vector<GruCache> cells;
  Vector probs;
  double log_norm = 0.0;  // log-sum-exp of the logits
  Vector logits;
};

// Shared by decode_distribution, greedy decoding and the training pass.
class DecoderRun {
 public:
  DecoderRun(const ModelParams& params, Direction direction, const EncoderOutput& encoder)
      : params_(params), p_(params.direction(direction)), encoder_(encoder) {
    use_attention_ = p_.attention_enabled && encoder.states.rows() > 0;
    if (use_attention_) projected_ = encoder.states * p_.attention.w_encoder.transpose();
  }

  void step(int32_t prev_id, DecoderState& state, StepTrace& trace) const {
    const auto embed = static_cast<Eigen::Index>(params_.embedding.cols());
    const auto hidden = static_cast<Eigen::Index>(hidden_dim_of(p_));
    Vector input(embed + hidden);
    input.head(embed) = params_.embedding.row(prev_id).transpose();
    trace.attended = use_attention_;
    if (use_attention_) {
      input.tail(hidden) = attention_forward(p_.attention, encoder_.states, projected_,
                                             state.layers.back(), &trace.attention);
    } else {
      input.tail(hidden).setZero();
    }
    trace.cells.clear();
    for (size_t l = 0; l < p_.decoder.size(); ++l) {
      trace.cells.push_back(gru_forward(p_.decoder[l], input, state.layers[l]));
      state.layers[l] = trace.cells.back().h;
      input = state.layers[l];
    }
    trace.logits = p_.output_w * input + p_.output_b;
    const double top = trace.logits.maxCoeff();
    trace.probs = (trace.logits.array() - top).exp().matrix();
    const double sum = trace.probs.sum();
    trace.probs /= sum;
    trace.log_norm = top + std::log(sum);
  }

 private:
  const ModelParams& params_;
  const DirectionParams& p_;
  const EncoderOutput& encoder_;
  bool use_attention_ = false;
  Matrix projected_;
};

DecoderState zero_state(const DirectionParams& p) {
  DecoderState state;
  state.layers.assign(p.decoder.size(), Vector::Zero(static_cast<Eigen::Index>(hidden_dim_of(p))));
  return state;
}

// Summed NLL of `target` given `input`. With `grads`, adds weight * dNLL.
double run_sequence(std::span<const int32_t> input, std::span<const int32_t> target,
                    const ModelParams& params, Direction direction, ModelParams* grads,
                    double weight) {
  const DirectionParams& p = params.direction(direction);
  const size_t layers = p.decoder.size();
  const auto hidden = static_cast<Eigen::Index>(hidden_dim_of(p));
  const auto embed = static_cast<Eigen::Index>(params.embedding.cols());

  EncoderTrace enc = run_encoder(input, params.embedding, p);
  DecoderState state = input.empty() ? zero_state(p) : DecoderState{enc.output.final};
  DecoderRun run(params, direction, enc.output);

  std::vector<StepTrace> steps(target.size());
  double nll = 0.0;
  int32_t prev = Vocabulary::kGo;
  for (size_t t = 0; t < target.size(); ++t) {
    run.step(prev, state, steps[t]);
    nll += steps[t].log_norm - steps[t].logits[target[t]];
    prev = target[t];
  }
  if (grads == nullptr) return nll;

  DirectionParams& g = grads->direction(direction);
  std::vector<Vector> dstate(layers, Vector::Zero(hidden));
  Matrix dstates = Matrix::Zero(enc.output.states.rows(), hidden);
  Vector dx, dh_prev, dquery;
  for (size_t t = target.size(); t-- > 0;) {
    StepTrace& s = steps[t];
    Vector dlogits = weight * s.probs;
    dlogits[target[t]] -= weight;
    const Vector& top = s.cells.back().h;
    g.output_w.noalias() += dlogits * top.transpose();
    g.output_b += dlogits;
    dstate[layers - 1].noalias() += p.output_w.transpose() * dlogits;
    for (size_t l = layers; l-- > 0;) {
      gru_backward(p.decoder[l], s.cells[l], dstate[l], g.decoder[l], dx, dh_prev);
      dstate[l] = dh_prev;
      if (l > 0) dstate[l - 1] += dx;
    }
    const int32_t prev_id = t == 0 ? Vocabulary::kGo : target[t - 1];
    grads->embedding.row(prev_id) += dx.head(embed).transpose();
    if (s.attended) {
      attention_backward(p.attention, s.attention, enc.output.states, dx.tail(hidden),
                         g.attention, dstates, dquery);
      dstate[layers - 1] += dquery;
    }
  }

  // dstate now holds the gradient of the decoder's initial state, which is
  // the encoder's final state.
  for (size_t t = input.size(); t-- > 0;) {
    dstate[layers - 1] += dstates.row(static_cast<Eigen::Index>(t)).transpose();
    for (size_t l = layers; l-- > 0;) {
      gru_backward(p.encoder[l], enc.steps[t][l], dstate[l], g.encoder[l], dx, dh_prev);
      dstate[l] = dh_prev;
      if (l > 0) {
        dstate[l - 1] += dx;
      } else {
        grads->embedding.row(input[t]) += dx.transpose();
      }
    }
  }
  return nll;
}

DirectionParams make_direction(const Hyperparams& hp, bool attention) {
  const size_t d = hp.embed_dim;
  const size_t h = hp.hidden_dim;
  DirectionParams p;
  for (size_t l = 0; l < hp.layers; ++l) {
    p.encoder.push_back(GruLayer::zeros(l == 0 ? d : h, h));
    p.decoder.push_back(GruLayer::zeros(l == 0 ? d + h : h, h));
  }
  const auto hi = static_cast<Eigen::Index>(h);
  p.attention.w_encoder = Matrix::Zero(hi, hi);
  p.attention.w_decoder = Matrix::Zero(hi, hi);
  p.attention.v = Vector::Zero(hi);
  p.output_w = Matrix::Zero(static_cast<Eigen::Index>(hp.vocab_size), hi);
  p.output_b = Vector::Zero(static_cast<Eigen::Index>(hp.vocab_size));
  p.attention_enabled = attention;
  return p;
}

}  // namespace

void Hyperparams::validate() const {
  if (vocab_size == 0 || embed_dim == 0 || hidden_dim == 0 || layers == 0 || batch_size == 0 ||
      max_decode_len == 0) {
    throw std::invalid_argument("model dimensions must be positive");
  }
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(ae_weight >= 0.0)) throw std::invalid_argument("ae_weight must be nonnegative");
  if (!(clip_norm > 0.0)) throw std::invalid_argument("clip_norm must be positive");
}

GruLayer GruLayer::zeros(size_t input_dim, size_t hidden_dim) {
  const auto in = static_cast<Eigen::Index>(input_dim);
  const auto h = static_cast<Eigen::Index>(hidden_dim);
  GruLayer layer;
  for (Matrix* w : {&layer.w_update, &layer.w_reset, &layer.w_candidate}) *w = Matrix::Zero(h, in);
  for (Matrix* u : {&layer.u_update, &layer.u_reset, &layer.u_candidate}) *u = Matrix::Zero(h, h);
  for (Vector* b : {&layer.b_update, &layer.b_reset, &layer.b_candidate}) *b = Vector::Zero(h);
  return layer;
}

ModelParams ModelParams::zeros(const Hyperparams& hp) {
  hp.validate();
  ModelParams params;
  params.embedding = Matrix::Zero(static_cast<Eigen::Index>(hp.vocab_size),
                                  static_cast<Eigen::Index>(hp.embed_dim));
  params.forward = make_direction(hp, true);
  params.backward = make_direction(hp, hp.backward_attention);
  return params;
}

ModelParams ModelParams::initialize(const Hyperparams& hp) {
  ModelParams params = zeros(hp);
  Rng rng(hp.seed);
  params.for_each([&rng](const std::string& name, std::span<double> values, size_t, size_t cols) {
    const bool bias = cols == 1 && !name.ends_with("attention.v");
    if (bias) return;
    for (double& v : values) v = rng.uniform(-kInitRange, kInitRange);
  });
  return params;
}

ModelParams ModelParams::zeros_like(const ModelParams& other) {
  ModelParams out = other;
  out.for_each([](const std::string&, std::span<double> values, size_t, size_t) {
    std::fill(values.begin(), values.end(), 0.0);
  });
  return out;
}

size_t ModelParams::parameter_count() const {
  size_t n = 0;
  for_each([&n](const std::string&, std::span<const double> v, size_t, size_t) { n += v.size(); });
  return n;
}

double ModelParams::squared_norm() const {
  double sum = 0.0;
  for_each([&sum](const std::string&, std::span<const double> v, size_t, size_t) {
    for (double x : v) sum += x * x;
  });
  return sum;
}

bool ModelParams::all_finite() const {
  bool finite = true;
  for_each([&finite](const std::string&, std::span<const double> v, size_t, size_t) {
    for (double x : v) finite = finite && std::isfinite(x);
  });
  return finite;
}

void ModelParams::add_scaled(const ModelParams& other, double scale) {
  std::vector<std::span<const double>> sources;
  other.for_each([&sources](const std::string&, std::span<const double> v, size_t, size_t) {
    sources.push_back(v);
  });
  size_t i = 0;
  for_each([&](const std::string& name, std::span<double> v, size_t, size_t) {
    const std::span<const double> src = sources.at(i++);
    if (src.size() != v.size()) throw std::invalid_argument("shape mismatch in " + name);
    for (size_t k = 0; k < v.size(); ++k) v[k] += scale * src[k];
  });
}

Vector gru_cell(const Vector& x, const Vector& h_prev, const GruLayer& layer) {
  if (!x.allFinite() || !h_prev.allFinite()) throw NumericError("non-finite GRU input");
  if (x.size() != layer.w_update.cols() || h_prev.size() != layer.u_update.cols()) {
    throw std::invalid_argument("GRU dimension mismatch");
  }
  return gru_forward(layer, x, h_prev).h;
}

EncoderOutput encode(std::span<const int32_t> ids, const ModelParams& params,
                     Direction direction) {
  if (ids.empty()) throw DataError("cannot encode an empty sequence");
  check_ids(ids, vocab_of(params));
  return run_encoder(ids, params.embedding, params.direction(direction)).output;
}

AttentionResult attend(const Vector& query, const Matrix& states, const AttentionParams& params) {
  if (states.rows() == 0) throw std::invalid_argument("attention over no states");
  AttentionCache cache;
  const Matrix projected = states * params.w_encoder.transpose();
  AttentionResult result;
  result.context = attention_forward(params, states, projected, query, &cache);
  result.weights = std::move(cache.weights);
  return result;
}

DecoderState initial_decoder_state(const EncoderOutput& encoder, const ModelParams& params,
                                   Direction direction) {
  if (encoder.states.rows() == 0) return zero_state(params.direction(direction));
  return DecoderState{encoder.final};
}

Vector decode_distribution(int32_t prev_id, DecoderState& state, const EncoderOutput& encoder,
                           const ModelParams& params, Direction direction) {
  check_ids(std::span(&prev_id, 1), vocab_of(params));
  DecoderRun run(params, direction, encoder);
  StepTrace trace;
  run.step(prev_id, state, trace);
  return trace.probs;
}

std::vector<int32_t> greedy_decode(std::span<const int32_t> input, const ModelParams& params,
                                   size_t max_len, Direction direction) {
  check_ids(input, vocab_of(params));
  const DirectionParams& p = params.direction(direction);
  EncoderOutput encoder = run_encoder(input, params.embedding, p).output;
  DecoderState state = initial_decoder_state(encoder, params, direction);
  DecoderRun run(params, direction, encoder);
  std::vector<int32_t> out;
  StepTrace trace;
  int32_t prev = Vocabulary::kGo;
  while (out.size() < max_len) {
    run.step(prev, state, trace);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < trace.logits.size(); ++i) {
      if (trace.logits[i] > trace.logits[best]) best = i;
    }
    const auto id = static_cast<int32_t>(best);
    if (id == Vocabulary::kEos) break;
    out.push_back(id);
    prev = id;
  }
  return out;
}

double teacher_forced_loss(std::span<const int32_t> input, std::span<const int32_t> target,
                           const ModelParams& params) {
  if (target.empty()) throw std::invalid_argument("empty target");
  check_ids(input, vocab_of(params));
  check_ids(target, vocab_of(params));
  return run_sequence(input, target, params, Direction::kForward, nullptr, 0.0) /
         static_cast<double>(target.size());
}

double reconstruction_loss(std::span<const int32_t> decoded, std::span<const int32_t> input,
                           const ModelParams& params) {
  check_ids(decoded, vocab_of(params));
  check_ids(input, vocab_of(params));
  std::vector<int32_t> target(input.begin(), input.end());
  target.push_back(Vocabulary::kEos);
  return run_sequence(decoded, target, params, Direction::kBackward, nullptr, 0.0) /
         static_cast<double>(target.size());
}

Example make_example(const BiographyInstance& instance, const Vocabulary& vocab) {
  const BiographyInstance delex = delexicalize_title(instance, vocab.copy_tokens());
  Example example;
  example.input = vocab.encode(linearize(delex.record));
  example.target = vocab.encode(delex.sentence);
  example.target.push_back(Vocabulary::kEos);
  return example;
}

LossBreakdown batch_loss(std::span<const Example> batch, const ModelParams& params,
                         const Hyperparams& hp, ModelParams* grads,
                         const std::vector<std::vector<int32_t>>* decodes) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  if (decodes != nullptr && decodes->size() != batch.size()) {
    throw std::invalid_argument("decode override size mismatch");
  }
  const size_t vocab = vocab_of(params);
  size_t forward_tokens = 0;
  size_t reconstruction_tokens = 0;
  for (const Example& ex : batch) {
    if (ex.target.empty() || ex.target.back() != Vocabulary::kEos) {
      throw std::invalid_argument("targets must end with <eos>");
    }
    check_ids(ex.input, vocab);
    check_ids(ex.target, vocab);
    forward_tokens += ex.target.size();
    reconstruction_tokens += ex.input.size() + 1;
  }

  LossBreakdown loss;
  double nll = 0.0;
  const double forward_weight = 1.0 / static_cast<double>(forward_tokens);
  for (const Example& ex : batch) {
    nll += run_sequence(ex.input, ex.target, params, Direction::kForward, grads, forward_weight);
  }
  loss.forward_loss = nll * forward_weight;

  if (hp.ae_weight > 0.0) {
    const double scale = 1.0 / static_cast<double>(reconstruction_tokens);
    double rec = 0.0;
    std::vector<int32_t> target;
    for (size_t i = 0; i < batch.size(); ++i) {
      const Example& ex = batch[i];
      const std::vector<int32_t> decoded =
          decodes != nullptr ? (*decodes)[i]
                             : greedy_decode(ex.input, params, hp.max_decode_len);
      if (decoded.empty()) ++loss.empty_decodes;
      target.assign(ex.input.begin(), ex.input.end());
      target.push_back(Vocabulary::kEos);
      rec += run_sequence(decoded, target, params, Direction::kBackward, grads,
                          hp.ae_weight * scale);
    }
    loss.reconstruction_loss = rec * scale;
  }
  loss.total = loss.forward_loss + hp.ae_weight * loss.reconstruction_loss;
  return loss;
}

LossBreakdown train_step(std::span<const Example> batch, ModelParams& params,
                         const Hyperparams& hp) {
  ModelParams grads = ModelParams::zeros_like(params);
  const LossBreakdown loss = batch_loss(batch, params, hp, &grads);
  if (!std::isfinite(loss.total) || !grads.all_finite()) {
    throw NumericError("non-finite loss or gradient (total=" + std::to_string(loss.total) + ")");
  }
  const double norm = std::sqrt(grads.squared_norm());
  const double scale = norm > hp.clip_norm ? hp.clip_norm / norm : 1.0;
  params.add_scaled(grads, -hp.learning_rate * scale);
  return loss;
}

Tokens generate(const FactRecord& record, const ModelParams& params, const Vocabulary& vocab,
                const Hyperparams& hp) {
  BiographyInstance instance;
  instance.record = record;
  const BiographyInstance delex = delexicalize_title(instance, vocab.copy_tokens());
  const std::vector<int32_t> input = vocab.encode(linearize(delex.record));
  const std::vector<int32_t> output = greedy_decode(input, params, hp.max_decode_len);
  return relexicalize(vocab.decode(output), record.title);
}

}  // namespace factgen
