// Copyright 2026 The Groundkit Authors
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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "groundkit/action.hpp"
#include "groundkit/records.hpp"
#include "groundkit/snapshot.hpp"

namespace groundkit {

// A deterministic synthetic GUI: a state graph whose nodes are interface
// snapshots and whose edges are (element, action) interactions. It stands in
// for a live OS harness at desk scale; a live backend can be dropped in
// behind the same contract because the emitted record schemas are identical.

struct EnvTransition {
  std::string from;
  std::vector<int> element;  // node path into the from-state's snapshot
  std::string action;        // CLICK / TYPE / SCROLL or a declared custom name
  std::optional<std::string> text;             // TYPE and text-slot customs
  std::optional<ScrollDirection> direction;    // SCROLL and direction slots
  std::string to;
};

struct GuiEnvironment {
  std::string id;
  std::string task;  // high-level instruction the trajectories serve
  std::string initial;
  std::map<std::string, PageSnapshot> states;
  std::vector<EnvTransition> transitions;
  CustomActionManifest custom_actions;
};

// Environment fixture file: states (inline snapshots) plus a transition
// table; schema-versioned. See docs/formats.md.
GuiEnvironment parse_environment(std::string_view json_text);
GuiEnvironment load_environment(const std::string& path);

enum class PolicyKind { Dfs, RandomWalk };

struct ExplorationPolicy {
  PolicyKind kind = PolicyKind::Dfs;
  int max_steps = 1000;
  std::uint64_t seed = 0;  // RANDOM_WALK only
};

struct TrajectoryStep {
  std::string state;
  std::vector<int> element;
  UnifiedAction action;
  std::string next_state;

  bool operator==(const TrajectoryStep&) const = default;
};

// Steps chain: step[i].next_state == step[i+1].state.
struct Trajectory {
  std::vector<TrajectoryStep> steps;

  bool operator==(const Trajectory&) const = default;
};

struct ExplorationResult {
  std::vector<std::string> visited;  // discovery order, initial first
  std::vector<Trajectory> trajectories;
  long backtracks = 0;  // DFS only
};

// DFS visits every reachable state exactly once, taking outgoing transitions
// in document order of their source elements; it emits one trajectory per
// root-to-leaf path of the DFS tree and throws BudgetExhaustedError if
// max_steps runs out first. RANDOM_WALK takes max_steps seeded uniform
// choices among outgoing transitions (revisits and self-loops allowed,
// stopping early only in a dead end) and emits a single trajectory.
// Identical (environment, policy) inputs give byte-identical results.
ExplorationResult explore(const GuiEnvironment& env,
                          const ExplorationPolicy& policy);

// Serialized trajectory string, one action per step in the TAGGED dialect.
std::vector<std::string> serialize_trajectory(const Trajectory& trajectory);

// Expands a trajectory into per-step training records: step i carries the
// serialized history of actions 0..i-1 and its own action as ground truth.
std::vector<AgentStep> trajectory_to_steps(const Trajectory& trajectory,
                                           const std::string& task_instruction,
                                           const GuiEnvironment& env);

}  // namespace groundkit
