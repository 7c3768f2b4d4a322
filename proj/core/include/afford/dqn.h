// Copyright 2026 The afford Authors.
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

// A small dense deep Q-network on downscaled grayscale frames.

#ifndef AFFORD_DQN_H_
#define AFFORD_DQN_H_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "afford/engine.h"
#include "afford/environment.h"

namespace afford {

// Rectifier hidden layers, identity output.
struct DenseNet {
  std::vector<Eigen::MatrixXd> weights;  // weights[l] is out x in
  std::vector<Eigen::VectorXd> biases;

  int input_size() const { return weights.empty() ? 0 : static_cast<int>(weights.front().cols()); }
  int output_size() const { return biases.empty() ? 0 : static_cast<int>(biases.back().size()); }
  std::vector<int> layer_sizes() const;
  bool finite() const;
};

// He-initialized weights, zero biases.
DenseNet make_net(const std::vector<int>& layer_sizes, std::uint64_t seed);

// Throws ContractViolation on an input size mismatch.
Eigen::VectorXd forward(const DenseNet& net, const Eigen::VectorXd& input);

struct DqnTransition {
  Eigen::VectorXd frame;
  int action = 0;
  double reward = 0.0;
  Eigen::VectorXd next_frame;
  bool terminal = false;
};

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Mean over the batch of (Q(s, a) - y)^2 with y = r + gamma * max Q_target(s', .)
// for non-terminal transitions.
double td_loss(const DenseNet& net, std::span<const DqnTransition> batch, double gamma,
               const DenseNet& target);

// Gradient of td_loss with respect to `net`; targets are held fixed.
Gradients backward(const DenseNet& net, std::span<const DqnTransition> batch, double gamma,
                   const DenseNet& target);

void sgd(DenseNet& net, const Gradients& grads, double learning_rate);

class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);
  void push(DqnTransition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const DqnTransition& at(std::size_t i) const { return items_[i]; }
  // `n` distinct indices drawn uniformly; throws ContractViolation if n > size.
  std::vector<std::size_t> sample_indices(std::size_t n, std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<DqnTransition> items_;
};

// Mean gray level per grid cell in [0, 1], row-major.
Eigen::VectorXd preprocess(const PixelFrame& frame, int grid_width, int grid_height);

struct DqnConfig {
  std::vector<int> hidden = {128, 64};
  int batch_size = 32;
  std::size_t buffer_capacity = 50000;
  int target_sync = 1000;  // updates between target-network copies
  double learning_rate = 1e-3;
  double gamma = 0.95;
  double epsilon_start = 1.0;
  double epsilon_end = 0.01;
  std::int64_t decay_steps = 250000;
  int cell_px = 4;  // render resolution before downscaling
  std::uint64_t seed = 0;
};

struct DqnResult {
  DenseNet net;
  std::vector<std::int64_t> episode_ends;
  std::vector<int> episode_scores;
  std::int64_t updates = 0;
  std::int64_t samples_consumed = 0;
};

using DqnHook = std::function<void(std::int64_t epoch, const DenseNet& net)>;

// One environment step per epoch and, once the buffer holds a batch, one
// batch update per step.
DqnResult dqn_train(GameEnv& env, const DqnConfig& config, std::int64_t epochs,
                    std::int64_t interval = 0, const DqnHook& hook = {});

// Greedy episodes (first maximal action on ties). Run r uses seed mix_seed(seed, r).
std::vector<int> evaluate_dqn(GameEnv& env, const DenseNet& net, int runs, std::uint64_t seed,
                              int cell_px = 4);

// Text header ("afford-dqn 1", "layers ...", "data") then every weight matrix
// row-major followed by its bias, as little-endian doubles.
void write_checkpoint(const DenseNet& net, std::ostream& out);
DenseNet read_checkpoint(std::istream& in);

}  // namespace afford

#endif  // AFFORD_DQN_H_
