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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "factgen/error.h"
#include "oracles/nn_oracle.h"
#include "oracles/toy_model.h"

namespace factgen {
namespace {

void expect_close(const Vector& actual, const std::vector<double>& expected, double tol) {
  ASSERT_EQ(static_cast<size_t>(actual.size()), expected.size());
  for (size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(actual[static_cast<Eigen::Index>(i)], expected[i], tol);
}

TEST(GruCellTest, ZeroWeightsHalveTheState) {
  // z = r = 0.5 and n = 0, so h' = h / 2.
  const GruLayer layer = GruLayer::zeros(3, 2);
  Vector h(2);
  h << 0.8, -0.4;
  const Vector out = gru_cell(Vector::Ones(3), h, layer);
  EXPECT_NEAR(out[0], 0.4, 1e-15);
  EXPECT_NEAR(out[1], -0.2, 1e-15);
}

TEST(GruCellTest, MatchesLoopOracle) {
  const Hyperparams hp = oracle::toy_hyperparams(0.0);
  const ModelParams params = oracle::random_params(hp, 3);
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(16), h(8);
    for (auto& v : x) v = rng.uniform(-1, 1);
    for (auto& v : h) v = rng.uniform(-1, 1);
    const GruLayer& layer = params.forward.decoder[0];
    expect_close(gru_cell(x, h, layer), oracle::gru(oracle::to_std(x), oracle::to_std(h), layer), 1e-12);
  }
}

TEST(GruCellTest, RejectsBadInput) {
  const GruLayer layer = GruLayer::zeros(3, 2);
  Vector x = Vector::Zero(3);
  x[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(gru_cell(x, Vector::Zero(2), layer), NumericError);
  EXPECT_THROW(gru_cell(Vector::Zero(4), Vector::Zero(2), layer), std::invalid_argument);
}

TEST(EncodeTest, MatchesStackedOracle) {
  const Hyperparams hp = oracle::toy_hyperparams(0.0);
  const ModelParams params = oracle::random_params(hp, 5);
  const std::vector<int32_t> ids = {4, 9, 13};
  const EncoderOutput out = encode(ids, params);
  ASSERT_EQ(out.states.rows(), 3);
  std::vector<std::vector<double>> h(2, std::vector<double>(8, 0.0));
  for (size_t t = 0; t < ids.size(); ++t) {
    std::vector<double> x = oracle::to_std(params.embedding.row(ids[t]).transpose());
    for (size_t l = 0; l < 2; ++l) x = h[l] = oracle::gru(x, h[l], params.forward.encoder[l]);
    expect_close(out.states.row(static_cast<Eigen::Index>(t)).transpose(), h[1], 1e-12);
  }
  expect_close(out.final[0], h[0], 1e-12);
  expect_close(out.final[1], h[1], 1e-12);
  EXPECT_THROW(encode(std::vector<int32_t>{}, params), DataError);
  EXPECT_THROW(encode(std::vector<int32_t>{20}, params), DataError);
}

TEST(AttendTest, MatchesOracleAndSumsToOne) {
  const Hyperparams hp = oracle::toy_hyperparams(0.0);
  const ModelParams params = oracle::random_params(hp, 6);
  const EncoderOutput enc = encode(std::vector<int32_t>{4, 5, 6, 7, 8}, params);
  Vector query(8);
  query.setLinSpaced(-0.5, 0.5);
  const AttentionResult result = attend(query, enc.states, params.forward.attention);
  std::vector<std::vector<double>> states;
  for (Eigen::Index i = 0; i < enc.states.rows(); ++i) states.push_back(oracle::to_std(enc.states.row(i).transpose()));
  const oracle::OracleAttention expected = oracle::attention(oracle::to_std(query), states, params.forward.attention);
  expect_close(result.weights, expected.weights, 1e-12);
  expect_close(result.context, expected.context, 1e-12);
  EXPECT_NEAR(result.weights.sum(), 1.0, 1e-12);
  EXPECT_GE(result.weights.minCoeff(), 0.0);
}

TEST(AttendTest, ZeroScoringVectorIsUniform) {
  const Hyperparams hp = oracle::toy_hyperparams(0.0);
  ModelParams params = oracle::random_params(hp, 6);
  params.forward.attention.v.setZero();
  const EncoderOutput enc = encode(std::vector<int32_t>{4, 5, 6, 7}, params);
  const AttentionResult result = attend(Vector::Ones(8), enc.states, params.forward.attention);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(result.weights[i], 0.25, 1e-15);
  expect_close(result.context, oracle::to_std(enc.states.colwise().mean().transpose()), 1e-12);
}

TEST(DecodeTest, DistributionIsNormalized) {
  const Hyperparams hp = oracle::toy_hyperparams(0.0);
  const ModelParams params = oracle::random_params(hp, 8);
  const EncoderOutput enc = encode(std::vector<int32_t>{4, 5}, params);
  DecoderState state = initial_decoder_state(enc, params);
  for (int32_t prev : {Vocabulary::kGo, 9, 12}) {
    const Vector p = decode_distribution(prev, state, enc, params);
    EXPECT_EQ(p.size(), 20);
    EXPECT_NEAR(p.sum(), 1.0, 1e-12);
    EXPECT_GT(p.minCoeff(), 0.0);
  }
}

TEST(DecodeTest, ZeroModelScoresLogV) {
  // All-zero parameters give a uniform output distribution.
  const Hyperparams hp = oracle::toy_hyperparams(1.0);
  const ModelParams params = ModelParams::zeros(hp);
  const auto batch = oracle::toy_batch();
  EXPECT_NEAR(teacher_forced_loss(batch[0].input, batch[0].target, params), std::log(20.0), 1e-12);
  EXPECT_NEAR(reconstruction_loss(std::vector<int32_t>{}, batch[1].input, params), std::log(20.0), 1e-12);
  const LossBreakdown loss = batch_loss(batch, params, hp);
  EXPECT_NEAR(loss.forward_loss, std::log(20.0), 1e-12);
  EXPECT_NEAR(loss.reconstruction_loss, std::log(20.0), 1e-12);
  EXPECT_NEAR(loss.total, 2 * std::log(20.0), 1e-12);
  // Ties go to id 0 (<pad>), so every greedy decode runs to max_len.
  EXPECT_EQ(greedy_decode(batch[0].input, params, 4), (std::vector<int32_t>{0, 0, 0, 0}));
}

TEST(DecodeTest, GreedyFollowsTheOutputBias) {
  const Hyperparams hp = oracle::toy_hyperparams(0.0);
  ModelParams params = ModelParams::zeros(hp);
  params.forward.output_b[11] = 1.0;
  EXPECT_EQ(greedy_decode(std::vector<int32_t>{4}, params, 3), (std::vector<int32_t>{11, 11, 11}));
  params.forward.output_b[Vocabulary::kEos] = 2.0;
  EXPECT_TRUE(greedy_decode(std::vector<int32_t>{4}, params, 3).empty());
}

TEST(DecodeTest, GreedyMatchesArgmaxOfDistribution) {
  const Hyperparams hp = oracle::toy_hyperparams(0.0);
  const ModelParams params = oracle::random_params(hp, 12, 1.0);
  const std::vector<int32_t> input = {5, 6, 7};
  const std::vector<int32_t> decoded = greedy_decode(input, params, 6);
  const EncoderOutput enc = encode(input, params);
  DecoderState state = initial_decoder_state(enc, params);
  int32_t prev = Vocabulary::kGo;
  for (size_t t = 0; t <= decoded.size() && t < 6; ++t) {
    Eigen::Index best = 0;
    decode_distribution(prev, state, enc, params).maxCoeff(&best);
    if (t == decoded.size()) {
      EXPECT_EQ(best, Vocabulary::kEos);
      break;
    }
    EXPECT_EQ(best, decoded[t]);
    prev = decoded[t];
  }
}

TEST(LossTest, TeacherForcedLossMatchesStepwiseDistribution) {
  const Hyperparams hp = oracle::toy_hyperparams(0.0);
  const ModelParams params = oracle::random_params(hp, 13);
  const auto batch = oracle::toy_batch();
  const Example& ex = batch[1];
  const EncoderOutput enc = encode(ex.input, params);
  DecoderState state = initial_decoder_state(enc, params);
  double nll = 0;
  int32_t prev = Vocabulary::kGo;
  for (int32_t target : ex.target) {
    nll -= std::log(decode_distribution(prev, state, enc, params)[target]);
    prev = target;
  }
  EXPECT_NEAR(teacher_forced_loss(ex.input, ex.target, params), nll / static_cast<double>(ex.target.size()), 1e-12);
}

TEST(LossTest, BatchLossWeighsTokensAndSkipsReconstruction) {
  const Hyperparams hp = oracle::toy_hyperparams(0.0);
  const ModelParams params = oracle::random_params(hp, 14);
  const auto batch = oracle::toy_batch();
  double sum = 0;
  size_t tokens = 0;
  for (const Example& ex : batch) {
    sum += teacher_forced_loss(ex.input, ex.target, params) * static_cast<double>(ex.target.size());
    tokens += ex.target.size();
  }
  const LossBreakdown loss = batch_loss(batch, params, hp);
  EXPECT_NEAR(loss.forward_loss, sum / static_cast<double>(tokens), 1e-12);
  EXPECT_EQ(loss.reconstruction_loss, 0.0);
  EXPECT_EQ(loss.total, loss.forward_loss);
}

TEST(LossTest, ReconstructionUsesGreedyDecodes) {
  Hyperparams hp = oracle::toy_hyperparams(0.5);
  const ModelParams params = oracle::random_params(hp, 15);
  const auto batch = oracle::toy_batch();
  double sum = 0;
  size_t tokens = 0;
  for (const Example& ex : batch) {
    const auto decoded = greedy_decode(ex.input, params, hp.max_decode_len);
    sum += reconstruction_loss(decoded, ex.input, params) * static_cast<double>(ex.input.size() + 1);
    tokens += ex.input.size() + 1;
  }
  const LossBreakdown loss = batch_loss(batch, params, hp);
  EXPECT_NEAR(loss.reconstruction_loss, sum / static_cast<double>(tokens), 1e-12);
  EXPECT_NEAR(loss.total, loss.forward_loss + 0.5 * loss.reconstruction_loss, 1e-12);
}

TEST(TrainStepTest, DescendsAndIsDeterministic) {
  Hyperparams hp = oracle::toy_hyperparams(1.0);
  hp.learning_rate = 0.5;
  const auto batch = oracle::toy_batch();
  ModelParams a = ModelParams::initialize(hp);
  ModelParams b = ModelParams::initialize(hp);
  const double before = batch_loss(batch, a, hp).forward_loss;
  for (int i = 0; i < 30; ++i) {
    train_step(batch, a, hp);
    train_step(batch, b, hp);
  }
  EXPECT_LT(batch_loss(batch, a, hp).forward_loss, before - 0.5);
  EXPECT_EQ(a.squared_norm(), b.squared_norm());
}

TEST(TrainStepTest, ClipsTheUpdate) {
  Hyperparams hp = oracle::toy_hyperparams(0.0);
  hp.clip_norm = 1e-3;
  hp.learning_rate = 1.0;
  const ModelParams start = oracle::random_params(hp, 16);
  ModelParams params = start;
  train_step(oracle::toy_batch(), params, hp);
  ModelParams delta = params;
  delta.add_scaled(start, -1.0);
  EXPECT_NEAR(std::sqrt(delta.squared_norm()), 1e-3, 1e-9);
}

TEST(TrainStepTest, NonFiniteLeavesParamsUntouched) {
  const Hyperparams hp = oracle::toy_hyperparams(0.0);
  ModelParams params = oracle::random_params(hp, 17);
  params.forward.output_b[3] = std::numeric_limits<double>::infinity();
  const double norm_before = params.embedding.squaredNorm();
  EXPECT_THROW(train_step(oracle::toy_batch(), params, hp), NumericError);
  EXPECT_EQ(params.embedding.squaredNorm(), norm_before);
}

TEST(ParamsTest, InitializationAndCounts) {
  Hyperparams hp = oracle::toy_hyperparams(0.0);
  const ModelParams a = ModelParams::initialize(hp);
  EXPECT_EQ(a.squared_norm(), ModelParams::initialize(hp).squared_norm());
  size_t count = 0;
  a.for_each([&count](const std::string& name, std::span<const double> v, size_t, size_t cols) {
    count += v.size();
    for (double x : v) EXPECT_LT(std::abs(x), 0.08) << name;
    if (cols == 1 && !name.ends_with("attention.v")) {
      for (double x : v) EXPECT_EQ(x, 0.0) << name;
    }
  });
  EXPECT_EQ(count, a.parameter_count());
  // Embedding, then per direction: 2 encoder layers (input 8), 2 decoder
  // layers (input 16, then 8), attention and the output layer.
  const size_t gru8 = 3 * (8 * 8 + 8 * 8 + 8);
  const size_t gru16 = 3 * (16 * 8 + 8 * 8 + 8);
  const size_t direction = 3 * gru8 + gru16 + 2 * 64 + 8 + 20 * 8 + 20;
  EXPECT_EQ(count, 20 * 8 + 2 * direction);
  hp.seed = 2;
  EXPECT_NE(ModelParams::initialize(hp).squared_norm(), a.squared_norm());
}

TEST(HyperparamsTest, Validation) {
  Hyperparams hp = oracle::toy_hyperparams(0.0);
  EXPECT_NO_THROW(hp.validate());
  hp.vocab_size = 0;
  EXPECT_THROW(hp.validate(), std::invalid_argument);
  hp = oracle::toy_hyperparams(-1.0);
  EXPECT_THROW(hp.validate(), std::invalid_argument);
}

TEST(ExampleTest, DelexicalizesAndAppendsEos) {
  BiographyInstance instance;
  instance.record.title = {"ann", "lee"};
  instance.record.facts = {{"OCCUPATION", {"actor"}}};
  instance.sentence = {"ann", "lee", "is", "an", "actor", "."};
  const std::vector<Tokens> corpus = {{"TITLE", "OCCUPATION", "actor", "is", "an", "."}};
  const Vocabulary vocab = build_vocabulary(corpus, 100, 4, {"OCCUPATION", "TITLE"});
  const Example ex = make_example(instance, vocab);
  EXPECT_EQ(ex.target.back(), Vocabulary::kEos);
  EXPECT_EQ(vocab.decode(ex.target),
            (Tokens{copy_token(0), copy_token(1), "is", "an", "actor", ".", "<eos>"}));
  EXPECT_EQ(vocab.decode(ex.input).front(), "TITLE");
}

}  // namespace
}  // namespace factgen
