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

#include "afford/dqn.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "afford/error.h"
#include "afford/seed.h"

namespace afford {

namespace {

struct Activations {
  std::vector<Eigen::VectorXd> inputs;  // input to each layer
  std::vector<Eigen::VectorXd> pre;     // pre-activation of each layer
  Eigen::VectorXd output;
};

Activations forward_trace(const DenseNet& net, const Eigen::VectorXd& input) {
  Activations a;
  Eigen::VectorXd x = input;
  const std::size_t layers = net.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    a.inputs.push_back(x);
    Eigen::VectorXd z = net.weights[l] * x + net.biases[l];
    a.pre.push_back(z);
    x = l + 1 < layers ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  a.output = x;
  return a;
}

double target_value(const DqnTransition& t, double gamma, const DenseNet& target) {
  if (t.terminal) return t.reward;
  return t.reward + gamma * forward(target, t.next_frame).maxCoeff();
}

void check_batch(const DenseNet& net, std::span<const DqnTransition> batch) {
  if (batch.empty()) throw ContractViolation("empty batch");
  for (const auto& t : batch) {
    if (t.action < 0 || t.action >= net.output_size()) {
      throw ContractViolation("batch action out of range");
    }
  }
}

void put_double(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

double get_double(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw IoError("truncated checkpoint");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

int greedy(const Eigen::VectorXd& q) {
  Eigen::Index best = 0;
  q.maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace

std::vector<int> DenseNet::layer_sizes() const {
  std::vector<int> sizes;
  if (weights.empty()) return sizes;
  sizes.push_back(input_size());
  for (const auto& b : biases) sizes.push_back(static_cast<int>(b.size()));
  return sizes;
}

bool DenseNet::finite() const {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
  }
  return true;
}

DenseNet make_net(const std::vector<int>& layer_sizes, std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw ContractViolation("a network needs at least two layers");
  for (int s : layer_sizes) {
    if (s < 1) throw ContractViolation("layer sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  DenseNet net;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const int in = layer_sizes[l];
    const int out = layer_sizes[l + 1];
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / in));
    Eigen::MatrixXd w(out, in);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) w(r, c) = dist(rng);
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Zero(out));
  }
  return net;
}

Eigen::VectorXd forward(const DenseNet& net, const Eigen::VectorXd& input) {
  if (net.weights.empty()) throw ContractViolation("empty network");
  if (input.size() != net.input_size()) {
    throw ContractViolation("input has " + std::to_string(input.size()) +
                            " values, network expects " + std::to_string(net.input_size()));
  }
  Eigen::VectorXd x = input;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Eigen::VectorXd z = net.weights[l] * x + net.biases[l];
    x = l + 1 < net.weights.size() ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  return x;
}

double td_loss(const DenseNet& net, std::span<const DqnTransition> batch, double gamma,
               const DenseNet& target) {
  check_batch(net, batch);
  double sum = 0.0;
  for (const auto& t : batch) {
    const double diff = forward(net, t.frame)(t.action) - target_value(t, gamma, target);
    sum += diff * diff;
  }
  return sum / static_cast<double>(batch.size());
}

Gradients backward(const DenseNet& net, std::span<const DqnTransition> batch, double gamma,
                   const DenseNet& target) {
  check_batch(net, batch);
  const std::size_t layers = net.weights.size();
  Gradients g;
  for (std::size_t l = 0; l < layers; ++l) {
    g.weights.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    g.biases.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  const double scale = 2.0 / static_cast<double>(batch.size());
  for (const auto& t : batch) {
    if (t.frame.size() != net.input_size()) throw ContractViolation("batch frame size mismatch");
    const Activations a = forward_trace(net, t.frame);
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(net.output_size());
    delta(t.action) = scale * (a.output(t.action) - target_value(t, gamma, target));
    for (std::size_t l = layers; l-- > 0;) {
      if (l + 1 < layers) {
        delta = delta.cwiseProduct(
            a.pre[l].unaryExpr([](double z) { return z > 0.0 ? 1.0 : 0.0; }));
      }
      g.weights[l].noalias() += delta * a.inputs[l].transpose();
      g.biases[l] += delta;
      if (l > 0) delta = net.weights[l].transpose() * delta;
    }
  }
  return g;
}

void sgd(DenseNet& net, const Gradients& grads, double learning_rate) {
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    net.weights[l] -= learning_rate * grads.weights[l];
    net.biases[l] -= learning_rate * grads.biases[l];
  }
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ContractViolation("replay capacity must be positive");
}

void ReplayBuffer::push(DqnTransition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t n, std::mt19937_64& rng) const {
  if (n > items_.size()) throw ContractViolation("sample larger than the buffer");
  // Floyd's algorithm: n distinct indices without a full shuffle.
  std::vector<std::size_t> out;
  out.reserve(n);
  const std::size_t size = items_.size();
  for (std::size_t j = size - n; j < size; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const std::size_t v = pick(rng);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    else out.push_back(j);
  }
  return out;
}

Eigen::VectorXd preprocess(const PixelFrame& frame, int grid_width, int grid_height) {
  if (grid_width < 1 || grid_height < 1 || frame.width % grid_width != 0 ||
      frame.height % grid_height != 0) {
    throw ContractViolation("frame size is not a multiple of the grid");
  }
  const int px = frame.width / grid_width;
  const int py = frame.height / grid_height;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid_width * grid_height);
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * frame.width + x) * 3;
      const double gray = (0.299 * frame.pixels[i] + 0.587 * frame.pixels[i + 1] +
                           0.114 * frame.pixels[i + 2]) / 255.0;
      out((y / py) * grid_width + x / px) += gray;
    }
  }
  return out / static_cast<double>(px * py);
}

DqnResult dqn_train(GameEnv& env, const DqnConfig& config, std::int64_t epochs,
                    std::int64_t interval, const DqnHook& hook) {
  const GameSpec& spec = env.game().spec();
  const int w = spec.grid_width;
  const int h = spec.grid_height;
  std::vector<int> sizes = {w * h};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(env.num_keys());
  DqnResult result{make_net(sizes, mix_seed(config.seed, 1)), {}, {}, 0, 0};
  if (epochs <= 0) return result;

  DenseNet target = result.net;
  ReplayBuffer buffer(config.buffer_capacity);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> random_key(0, env.num_keys() - 1);
  std::uint64_t episode = 0;
  env.reset(mix_seed(config.seed, episode++));
  Eigen::VectorXd x = preprocess(env.render(config.cell_px), w, h);
  std::vector<DqnTransition> batch(config.batch_size);

  for (std::int64_t t = 0; t < epochs; ++t) {
    const double frac = config.decay_steps > 0
                            ? std::min(static_cast<double>(t) / config.decay_steps, 1.0)
                            : 1.0;
    const double epsilon =
        config.epsilon_start - (config.epsilon_start - config.epsilon_end) * frac;
    const int a = coin(rng) < epsilon ? random_key(rng) : greedy(forward(result.net, x));
    const Transition tr = env.step(a);
    Eigen::VectorXd next = preprocess(env.render(config.cell_px), w, h);
    buffer.push({x, a, static_cast<double>(tr.reward), next, tr.done});

    if (buffer.size() >= static_cast<std::size_t>(config.batch_size)) {
      const auto idx = buffer.sample_indices(config.batch_size, rng);
      for (int i = 0; i < config.batch_size; ++i) batch[i] = buffer.at(idx[i]);
      sgd(result.net, backward(result.net, batch, config.gamma, target), config.learning_rate);
      ++result.updates;
      result.samples_consumed += config.batch_size;
      if (result.updates % config.target_sync == 0) target = result.net;
    }

    if (tr.done) {
      result.episode_ends.push_back(t + 1);
      result.episode_scores.push_back(tr.score);
      env.reset(mix_seed(config.seed, episode++));
      x = preprocess(env.render(config.cell_px), w, h);
    } else {
      x = std::move(next);
    }
    if (interval > 0 && hook && (t + 1) % interval == 0) hook(t + 1, result.net);
  }
  return result;
}

std::vector<int> evaluate_dqn(GameEnv& env, const DenseNet& net, int runs, std::uint64_t seed,
                              int cell_px) {
  const GameSpec& spec = env.game().spec();
  std::vector<int> scores;
  for (int r = 0; r < runs; ++r) {
    env.reset(mix_seed(seed, static_cast<std::uint64_t>(r)));
    while (true) {
      const Eigen::VectorXd x = preprocess(env.render(cell_px), spec.grid_width, spec.grid_height);
      const Transition t = env.step(greedy(forward(net, x)));
      if (t.done) {
        scores.push_back(t.score);
        break;
      }
    }
  }
  return scores;
}

void write_checkpoint(const DenseNet& net, std::ostream& out) {
  out << "afford-dqn 1\nlayers";
  for (int s : net.layer_sizes()) out << ' ' << s;
  out << "\ndata\n";
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const auto& w = net.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) put_double(out, w(r, c));
    }
    for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) put_double(out, net.biases[l](i));
  }
}

DenseNet read_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "afford-dqn 1") throw IoError("not a DQN checkpoint");
  if (!std::getline(in, line)) throw IoError("missing layers line");
  std::istringstream fields(line);
  std::string word;
  fields >> word;
  if (word != "layers") throw IoError("missing layers line");
  std::vector<int> sizes;
  for (int s; fields >> s;) sizes.push_back(s);
  if (sizes.size() < 2 || std::any_of(sizes.begin(), sizes.end(), [](int s) { return s < 1; })) {
    throw IoError("bad layer sizes in checkpoint");
  }
  if (!std::getline(in, line) || line != "data") throw IoError("missing data marker");
  DenseNet net;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    Eigen::MatrixXd w(sizes[l + 1], sizes[l]);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = get_double(in);
    }
    Eigen::VectorXd b(sizes[l + 1]);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = get_double(in);
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

}  // namespace afford
