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

#include "afford/qlearner.h"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "afford/error.h"
#include "afford/pipeline.h"
#include "afford/seed.h"

namespace afford {

namespace {

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

QTable::QTable(int num_actions) : num_actions_(num_actions) {
  if (num_actions < 1) throw ContractViolation("a Q-table needs at least one action");
}

void QTable::check_action(int a) const {
  if (a < 0 || a >= num_actions_) {
    throw ContractViolation("action " + std::to_string(a) + " out of range");
  }
}

QTable::Row& QTable::row(std::uint64_t s) {
  auto [it, inserted] = rows_.try_emplace(s);
  if (inserted) {
    it->second.values.assign(num_actions_, 0.0);
    it->second.counts.assign(num_actions_, 0);
  }
  return it->second;
}

double QTable::value(std::uint64_t s, int a) const {
  check_action(a);
  auto it = rows_.find(s);
  return it == rows_.end() ? 0.0 : it->second.values[a];
}

std::uint64_t QTable::count(std::uint64_t s, int a) const {
  check_action(a);
  auto it = rows_.find(s);
  return it == rows_.end() ? 0 : it->second.counts[a];
}

double QTable::max_value(std::uint64_t s) const {
  auto it = rows_.find(s);
  if (it == rows_.end()) return 0.0;
  return *std::max_element(it->second.values.begin(), it->second.values.end());
}

void QTable::set(std::uint64_t s, int a, double value) {
  check_action(a);
  row(s).values[a] = value;
}

void QTable::record_update(std::uint64_t s, int a, double value) {
  check_action(a);
  Row& r = row(s);
  r.values[a] = value;
  ++r.counts[a];
}

void QTable::write(std::ostream& out) const {
  out << "actions " << num_actions_ << '\n';
  std::vector<std::uint64_t> keys;
  keys.reserve(rows_.size());
  for (const auto& [s, r] : rows_) keys.push_back(s);
  std::sort(keys.begin(), keys.end());
  for (std::uint64_t s : keys) {
    const Row& r = rows_.at(s);
    for (int a = 0; a < num_actions_; ++a) {
      out << s << ' ' << a << ' ' << shortest(r.values[a]) << ' ' << r.counts[a] << '\n';
    }
  }
}

QTable QTable::read(std::istream& in) {
  std::string word;
  int actions = 0;
  if (!(in >> word >> actions) || word != "actions" || actions < 1) {
    throw IoError("Q-table must start with 'actions N'");
  }
  QTable q(actions);
  std::string line;
  std::getline(in, line);
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::uint64_t s = 0, count = 0;
    int a = 0;
    std::string value_text;
    if (!(fields >> s >> a >> value_text >> count) || a < 0 || a >= actions) {
      throw IoError("malformed Q-table line " + std::to_string(number));
    }
    double value = 0;
    auto res = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (res.ec != std::errc() || res.ptr != value_text.data() + value_text.size()) {
      throw IoError("malformed Q-value on line " + std::to_string(number));
    }
    Row& r = q.row(s);
    r.values[a] = value;
    r.counts[a] = count;
  }
  return q;
}

double epsilon_at(const LearnerConfig& config, std::int64_t t) {
  if (config.decay_steps <= 0 || t >= config.decay_steps) return config.epsilon_end;
  const double frac = static_cast<double>(t) / static_cast<double>(config.decay_steps);
  return config.epsilon_start - (config.epsilon_start - config.epsilon_end) * frac;
}

int select_action(const QTable& q, std::uint64_t s, std::span<const int> actions,
                  double epsilon, std::mt19937_64& rng) {
  if (actions.empty()) throw ContractViolation("empty action set");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (epsilon > 0.0 && coin(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, actions.size() - 1);
    return actions[pick(rng)];
  }
  double best = q.value(s, actions[0]);
  for (int a : actions) best = std::max(best, q.value(s, a));
  std::vector<int> ties;
  for (int a : actions) {
    if (q.value(s, a) == best) ties.push_back(a);
  }
  if (ties.size() == 1) return ties.front();
  std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
  return ties[pick(rng)];
}

void update(QTable& q, std::uint64_t s, int a, double reward, std::uint64_t s_next,
            bool terminal, const LearnerConfig& config) {
  const double target = terminal ? reward : reward + config.gamma * q.max_value(s_next);
  const double old = q.value(s, a);
  q.record_update(s, a, (1.0 - config.alpha) * old + config.alpha * target);
}

TrainResult train(Environment& env, Perceiver& perceiver, const LearnerConfig& config,
                  std::int64_t epochs, std::int64_t interval, const IntervalHook& hook) {
  TrainResult result{QTable(env.num_keys()), {}};
  if (epochs <= 0) return result;
  QTable& q = result.table;
  std::vector<int> actions(env.num_keys());
  std::iota(actions.begin(), actions.end(), 0);
  std::mt19937_64 rng(config.seed);
  std::uint64_t episode = 0;
  perceiver.start(env.reset(mix_seed(config.seed, episode++)));
  std::uint64_t s = perceiver.state_key();
  for (std::int64_t t = 0; t < epochs; ++t) {
    const int a = select_action(q, s, actions, epsilon_at(config, t), rng);
    const Transition tr = env.step(a);
    perceiver.observe(a, tr);
    const std::uint64_t s_next = tr.done ? 0 : perceiver.state_key();
    update(q, s, a, tr.reward, s_next, tr.done, config);
    if (tr.done) {
      result.episodes.push_back({t + 1, tr.score});
      perceiver.start(env.reset(mix_seed(config.seed, episode++)));
      s = perceiver.state_key();
    } else {
      s = s_next;
    }
    if (interval > 0 && hook && (t + 1) % interval == 0) hook(t + 1, q);
  }
  return result;
}

}  // namespace afford
