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

// Frame-to-frame tracking and the five-category affordance model.
//
// Categories are learned per appearance signature from motion and contact
// evidence and then looked up in constant time. A resolved category is never
// revised.

#ifndef AFFORD_PERCEPTION_H_
#define AFFORD_PERCEPTION_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afford/appearance.h"
#include "afford/environment.h"

namespace afford {

enum class Category { kAgent, kStatic, kMovingGood, kMovingBad, kAgentObject, kUnknown };

const char* to_string(Category category);
Category parse_category(std::string_view text);

struct Match {
  int prev = 0;  // index into the previous frame
  int cur = 0;   // index into the current frame
  Cell displacement;
  friend bool operator==(const Match&, const Match&) = default;
};

struct TrackedObjects {
  std::vector<Match> correspondences;  // one-to-one
  std::vector<int> entered;            // current-frame indices without a match
  std::vector<int> exited;             // previous-frame indices without a match
};

// Objects farther apart than this (Manhattan cells) are never matched.
inline constexpr int kDefaultMatchGate = 4;

// Greedy nearest-neighbour matching between equal signatures: candidate pairs
// are taken in order of (distance, prev index, cur index).
TrackedObjects track(const Frame& prev, const Frame& cur, int gate = kDefaultMatchGate);

struct Evidence {
  int moved_count = 0;
  int stayed_count = 0;
  int positive_contacts = 0;
  int negative_contacts = 0;
  int spawned_by_agent_count = 0;
  int entered_count = 0;
  int stationary_run = 0;  // consecutive frames with every instance at rest
  bool contradictory = false;
  friend bool operator==(const Evidence&, const Evidence&) = default;
};

// Agent contact attributed to the other object's signature.
struct ContactEvidence {
  AppearanceSignature other;
  int reward = 0;
  bool agent_died = false;
};

// Everything perception learns from one step.
struct StepObservation {
  const Frame* prev = nullptr;
  const Frame* cur = nullptr;
  const TrackedObjects* tracked = nullptr;  // null when frames are unrelated
  std::span<const ContactEvidence> contacts;
  bool fired = false;              // the pressed key is bound to Fire
  std::optional<Box> agent_box;    // agent location when the key was pressed
};

class CategoryModel {
 public:
  static constexpr int kStaticFrames = 10;
  // Agent-spawned entries needed, and their minimum share of all entries.
  static constexpr int kSpawnEvidence = 3;
  static constexpr double kSpawnShare = 0.5;

  CategoryModel() = default;
  explicit CategoryModel(AppearanceSignature agent) : agent_(agent) {}

  void set_agent(AppearanceSignature agent) { agent_ = agent; }
  const std::optional<AppearanceSignature>& agent() const { return agent_; }

  // Accumulates evidence and resolves signatures that crossed a threshold.
  void update(const StepObservation& step);

  Category classify(const AppearanceSignature& sig) const;
  bool resolved(const AppearanceSignature& sig) const;

  const std::map<AppearanceSignature, Category>& assignments() const { return assignments_; }
  const std::map<AppearanceSignature, Evidence>& evidence() const { return evidence_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Text table, one signature per line, sorted:
  // "r,g,b WxH category moved stayed positive negative spawned entered run"
  void write(std::ostream& out) const;
  static CategoryModel read(std::istream& in);

  friend bool operator==(const CategoryModel& a, const CategoryModel& b) {
    return a.agent_ == b.agent_ && a.assignments_ == b.assignments_ &&
           a.evidence_ == b.evidence_;
  }

 private:
  void resolve(const AppearanceSignature& sig, Evidence& ev);

  std::optional<AppearanceSignature> agent_;
  std::map<AppearanceSignature, Category> assignments_;
  std::map<AppearanceSignature, Evidence> evidence_;
  std::vector<std::string> warnings_;
};

// Value-returning form of CategoryModel::update.
CategoryModel update_model(CategoryModel model, const StepObservation& step);

Category classify(const AppearanceSignature& sig, const CategoryModel& model);

// Agent-involving contacts of one transition, attributed to signatures found
// in the previous or current frame.
std::vector<ContactEvidence> agent_contacts(const Frame& prev, const Transition& t,
                                            int agent_instance_id);

}  // namespace afford

#endif  // AFFORD_PERCEPTION_H_
