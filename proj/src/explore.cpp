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

#include "groundkit/explore.hpp"

#include <algorithm>
#include <set>

#include "groundkit/error.hpp"
#include "groundkit/rng.hpp"

namespace groundkit {

namespace {

using nlohmann::ordered_json;

const NodeTree* resolve_node(const NodeTree& root,
                             const std::vector<int>& path) {
  const NodeTree* node = &root;
  for (int index : path) {
    if (index < 0 || static_cast<std::size_t>(index) >= node->children.size()) {
      return nullptr;
    }
    node = &node->children[static_cast<std::size_t>(index)];
  }
  return node;
}

// Builds the concrete action a transition performs. Coordinate-bearing
// slots are filled from the target element's geometry, normalized to the
// page frame.
UnifiedAction transition_action(const GuiEnvironment& env,
                                const EnvTransition& transition) {
  const auto& snapshot = env.states.at(transition.from);
  const NodeTree* node = resolve_node(snapshot.root, transition.element);
  if (!node) {
    throw DataError("environment " + env.id + ": transition from \"" +
                    transition.from + "\" references missing element path " +
                    node_path_string(transition.element));
  }
  Point center = normalize_point(
      PixelPoint{(node->bbox.x1 + node->bbox.x2 + 1) / 2,
                 (node->bbox.y1 + node->bbox.y2 + 1) / 2},
      snapshot.page_size);

  if (transition.action == "CLICK") {
    return UnifiedAction::click(center);
  }
  if (transition.action == "TYPE") {
    if (!transition.text || transition.text->empty()) {
      throw DataError("environment " + env.id +
                      ": TYPE transition requires text");
    }
    return UnifiedAction::type_text(*transition.text);
  }
  if (transition.action == "SCROLL") {
    if (!transition.direction) {
      throw DataError("environment " + env.id +
                      ": SCROLL transition requires direction");
    }
    return UnifiedAction::scroll(*transition.direction);
  }

  const std::vector<ArgSlot>* slots =
      env.custom_actions.find(transition.action);
  if (!slots) {
    throw UnmappedActionError("environment " + env.id +
                              ": custom action \"" + transition.action +
                              "\" not declared in the environment manifest");
  }
  CustomAction custom;
  custom.name = transition.action;
  for (ArgSlot slot : *slots) {
    switch (slot) {
      case ArgSlot::Point:
        custom.point = center;
        break;
      case ArgSlot::Box:
        custom.box = normalize_box(node->bbox, snapshot.page_size);
        break;
      case ArgSlot::Text:
        if (!transition.text || transition.text->empty()) {
          throw DataError("environment " + env.id + ": custom action " +
                          transition.action + " requires text");
        }
        custom.text = *transition.text;
        break;
      case ArgSlot::Direction:
        if (!transition.direction) {
          throw DataError("environment " + env.id + ": custom action " +
                          transition.action + " requires direction");
        }
        custom.direction = *transition.direction;
        break;
    }
  }
  return UnifiedAction::custom(std::move(custom));
}

// Outgoing transitions sorted by (element document order, action name): the
// deterministic tie-break for both policies. (from, element, action) is the
// transition key and must be unique.
std::map<std::string, std::vector<const EnvTransition*>> build_adjacency(
    const GuiEnvironment& env) {
  std::map<std::string, std::vector<const EnvTransition*>> adjacency;
  for (const auto& transition : env.transitions) {
    adjacency[transition.from].push_back(&transition);
  }
  for (auto& [state, list] : adjacency) {
    std::sort(list.begin(), list.end(),
              [](const EnvTransition* a, const EnvTransition* b) {
                if (a->element != b->element) return a->element < b->element;
                return a->action < b->action;
              });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i]->element == list[i - 1]->element &&
          list[i]->action == list[i - 1]->action) {
        throw DataError("environment " + env.id +
                        ": duplicate transition key (" + state + ", " +
                        node_path_string(list[i]->element) + ", " +
                        list[i]->action + ")");
      }
    }
  }
  return adjacency;
}

ExplorationResult explore_dfs(const GuiEnvironment& env, int max_steps) {
  auto adjacency = build_adjacency(env);
  ExplorationResult result;
  std::set<std::string> visited{env.initial};
  result.visited.push_back(env.initial);

  struct Frame {
    std::string state;
    std::size_t next = 0;      // next outgoing transition to inspect
    int discovered = 0;        // tree edges out of this state
  };
  std::vector<Frame> stack{Frame{env.initial}};
  std::vector<TrajectoryStep> path;
  int steps_taken = 0;
  long backtracks = 0;

  while (!stack.empty()) {
    Frame& frame = stack.back();
    const auto outgoing = adjacency.find(frame.state);
    bool descended = false;
    while (outgoing != adjacency.end() &&
           frame.next < outgoing->second.size()) {
      const EnvTransition* transition = outgoing->second[frame.next++];
      if (visited.count(transition->to)) continue;
      if (steps_taken >= max_steps) {
        std::size_t frontier = 0;
        for (const auto& f : stack) {
          auto it = adjacency.find(f.state);
          if (it == adjacency.end()) continue;
          for (std::size_t i = f.next; i < it->second.size(); ++i) {
            if (!visited.count(it->second[i]->to)) ++frontier;
          }
        }
        throw BudgetExhaustedError(
            "DFS step budget exhausted after " + std::to_string(steps_taken) +
                " steps",
            frontier + 1);  // +1 for the transition we just declined
      }
      ++steps_taken;
      ++frame.discovered;
      visited.insert(transition->to);
      result.visited.push_back(transition->to);
      path.push_back(TrajectoryStep{transition->from, transition->element,
                                    transition_action(env, *transition),
                                    transition->to});
      stack.push_back(Frame{transition->to});
      descended = true;
      break;
    }
    if (descended) continue;

    // State exhausted. A DFS-tree leaf terminates the current root-to-leaf
    // trajectory.
    if (frame.discovered == 0 && !path.empty()) {
      result.trajectories.push_back(Trajectory{path});
    }
    stack.pop_back();
    if (!stack.empty()) {
      ++backtracks;
      if (!path.empty()) path.pop_back();
    }
  }
  result.backtracks = backtracks;
  return result;
}

ExplorationResult explore_random_walk(const GuiEnvironment& env,
                                      const ExplorationPolicy& policy) {
  auto adjacency = build_adjacency(env);
  ExplorationResult result;
  std::set<std::string> visited{env.initial};
  result.visited.push_back(env.initial);

  SplitMix64 rng(policy.seed);
  Trajectory walk;
  std::string current = env.initial;
  for (int step = 0; step < policy.max_steps; ++step) {
    auto outgoing = adjacency.find(current);
    if (outgoing == adjacency.end() || outgoing->second.empty()) break;
    const EnvTransition* transition =
        outgoing->second[rng.bounded(outgoing->second.size())];
    walk.steps.push_back(TrajectoryStep{transition->from, transition->element,
                                        transition_action(env, *transition),
                                        transition->to});
    current = transition->to;
    if (visited.insert(current).second) {
      result.visited.push_back(current);
    }
  }
  result.trajectories.push_back(std::move(walk));
  return result;
}

}  // namespace

GuiEnvironment parse_environment(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("environment is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema") ||
      doc["schema"] != std::string(schemas::kEnv)) {
    throw DataError("environment: missing or unsupported schema, expected \"" +
                    std::string(schemas::kEnv) + "\"");
  }

  GuiEnvironment env;
  if (!doc.contains("id") || !doc["id"].is_string()) {
    throw DataError("environment: expected string id");
  }
  env.id = doc["id"].get<std::string>();
  if (doc.contains("task")) env.task = doc["task"].get<std::string>();
  if (!doc.contains("initial") || !doc["initial"].is_string()) {
    throw DataError("environment: expected initial state id");
  }
  env.initial = doc["initial"].get<std::string>();

  if (doc.contains("custom_actions")) {
    if (!doc["custom_actions"].is_string()) {
      throw DataError("environment: custom_actions must be manifest text");
    }
    env.custom_actions =
        CustomActionManifest::parse(doc["custom_actions"].get<std::string>());
  }

  if (!doc.contains("states") || !doc["states"].is_array()) {
    throw DataError("environment: expected states array");
  }
  for (const auto& state : doc["states"]) {
    if (!state.is_object() || !state.contains("id") ||
        !state.contains("snapshot")) {
      throw DataError("environment: each state needs {id, snapshot}");
    }
    std::string id = state["id"].get<std::string>();
    PageSnapshot snapshot = parse_snapshot(state["snapshot"].dump());
    if (env.states.count(id)) {
      throw DataError("environment: duplicate state \"" + id + "\"");
    }
    env.states.emplace(std::move(id), std::move(snapshot));
  }
  if (!env.states.count(env.initial)) {
    throw DataError("environment: initial state \"" + env.initial +
                    "\" not defined");
  }

  if (!doc.contains("transitions") || !doc["transitions"].is_array()) {
    throw DataError("environment: expected transitions array");
  }
  for (const auto& t : doc["transitions"]) {
    EnvTransition transition;
    transition.from = t.at("from").get<std::string>();
    transition.to = t.at("to").get<std::string>();
    transition.element = node_path_parse(t.at("element").get<std::string>());
    transition.action = t.at("action").get<std::string>();
    if (t.contains("text")) transition.text = t["text"].get<std::string>();
    if (t.contains("direction")) {
      auto dir = direction_from_name(t["direction"].get<std::string>());
      if (!dir) throw DataError("environment: unknown direction");
      transition.direction = dir;
    }
    if (!env.states.count(transition.from) ||
        !env.states.count(transition.to)) {
      throw DataError("environment: transition endpoints must be defined "
                      "states (" +
                      transition.from + " -> " + transition.to + ")");
    }
    if (!resolve_node(env.states.at(transition.from).root,
                      transition.element)) {
      throw DataError("environment: transition references missing element " +
                      node_path_string(transition.element) + " in state \"" +
                      transition.from + "\"");
    }
    env.transitions.push_back(std::move(transition));
  }

  // Validate action synthesis eagerly so malformed fixtures fail at load.
  for (const auto& transition : env.transitions) {
    transition_action(env, transition);
  }
  return env;
}

GuiEnvironment load_environment(const std::string& path) {
  return parse_environment(read_text_file(path));
}

ExplorationResult explore(const GuiEnvironment& env,
                          const ExplorationPolicy& policy) {
  if (policy.max_steps < 1) throw ConfigError("max_steps must be >= 1");
  if (policy.kind == PolicyKind::Dfs) {
    return explore_dfs(env, policy.max_steps);
  }
  return explore_random_walk(env, policy);
}

std::vector<std::string> serialize_trajectory(const Trajectory& trajectory) {
  std::vector<std::string> out;
  out.reserve(trajectory.steps.size());
  for (const auto& step : trajectory.steps) {
    out.push_back(serialize_action(step.action, Dialect::Tagged));
  }
  return out;
}

std::vector<AgentStep> trajectory_to_steps(const Trajectory& trajectory,
                                           const std::string& task_instruction,
                                           const GuiEnvironment& env) {
  for (std::size_t i = 1; i < trajectory.steps.size(); ++i) {
    if (trajectory.steps[i].state != trajectory.steps[i - 1].next_state) {
      throw DataError("trajectory steps do not chain");
    }
  }
  std::vector<AgentStep> steps;
  std::vector<std::string> history;
  for (const auto& traj_step : trajectory.steps) {
    AgentStep step;
    step.dataset = env.id;
    step.split = "env";
    step.task = task_instruction;
    step.history = history;
    step.screenshot_ref = traj_step.state;
    step.screen = env.states.at(traj_step.state).page_size;
    step.gt_action = serialize_action(traj_step.action, Dialect::Tagged);
    history.push_back(step.gt_action);
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace groundkit
