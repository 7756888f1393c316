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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "groundkit/action.hpp"
#include "groundkit/records.hpp"

namespace groundkit {

// Action-model evaluation metrics. All pure functions; boundary decisions
// are made in exact integer arithmetic so results are identical on every
// platform.

// Inclusive containment: x1 <= x <= x2 and y1 <= y <= y2.
bool point_in_box(const Point& pred, const Box& gt);

// Intersection area over union area on continuous per-mille geometry.
// When the union has zero area the result is 0, except two identical
// degenerate points, which count as 1.
double iou(const Box& a, const Box& b);

// Click correctness: the predicted point is correct when its Euclidean
// distance from the ground truth is at most 14% of the screen width
// (inclusive, and by width even when the screen is portrait). Distances are
// measured in continuous pixel space, i.e. per-mille deltas scaled by the
// screen dimensions without intermediate rounding, which keeps the check
// exact and invariant under simultaneous translation of both points.
bool click_correct(const Point& pred, const Point& gt, const PixelSize& screen);

// Token-level F1 between two strings: lowercase, whitespace-tokenized,
// multiset overlap. Both empty counts as 1.
double token_f1(std::string_view pred, std::string_view gt);

// Text correctness: F1 strictly greater than 0.5, decided exactly
// (4 * overlap > |pred| + |gt|).
bool text_correct(std::string_view pred, std::string_view gt);

struct StepVerdict {
  bool type_match = false;
  // Defined only when the ground truth carries a point (click-family);
  // true when the predicted coordinates pass click_correct regardless of
  // the predicted type.
  std::optional<bool> grounding_match;
  bool success = false;
};

// Appendix-style per-step scoring. Type is canonical-name exact match.
// The argument check dispatches on the ground-truth action's slots:
// point-bearing actions use click_correct, text-bearing use text_correct,
// SCROLL requires the exact direction, anything else requires exact
// equality. success = type_match AND argument check, so SR <= Type always.
StepVerdict step_success(const UnifiedAction& pred, const UnifiedAction& gt,
                         const PixelSize& screen);

struct AgentEval {
  long n = 0;
  long type_matches = 0;
  long successes = 0;
  long grounding_n = 0;        // steps whose ground truth bears a point
  long grounding_matches = 0;

  double type_em() const;
  double grounding() const;  // 0 when grounding_n == 0 (flagged in reports)
  double sr() const;
};

// Throws DataError on an empty verdict list.
AgentEval aggregate(const std::vector<StepVerdict>& verdicts);

struct MacroReport {
  std::map<std::string, AgentEval> splits;
  // Unweighted arithmetic means over splits, computed with exact rational
  // arithmetic before conversion to double.
  double macro_type_em = 0.0;
  double macro_grounding = 0.0;
  double macro_sr = 0.0;
};

MacroReport aggregate_macro(const std::map<std::string, AgentEval>& splits);

// Grounding-benchmark scoring over records with predictions attached:
// accuracy counts predictions whose point (box predictions use the box
// center) falls inside the ground-truth box; mean IoU averages over records
// where both sides are boxes.
struct GroundingEval {
  long n = 0;
  long hits = 0;
  long iou_n = 0;
  double iou_sum = 0.0;

  double accuracy() const;
  double mean_iou() const;
};

GroundingEval evaluate_grounding(const std::vector<GroundingRecord>& records);

// Bundled trivial predictors for exercising the evaluation path end to end.
enum class PredictorKind { GtEcho, ConstantClick, RandomSeeded };

std::optional<PredictorKind> predictor_from_name(std::string_view name);

// Fills predicted_action on steps that lack one.
void fill_predictions(std::vector<AgentStep>& steps, PredictorKind kind,
                      std::uint64_t seed);

// Fills predicted_point/predicted_box on grounding records that lack them.
void fill_grounding_predictions(std::vector<GroundingRecord>& records,
                                PredictorKind kind, std::uint64_t seed);

// Scores one serialized step. Actions are parsed with the given manifest;
// parse failures on the predicted side count as plain misses rather than
// hard errors (a model is allowed to emit garbage).
StepVerdict evaluate_step(const AgentStep& step,
                          const CustomActionManifest& manifest);

// Evaluates serialized steps grouped by "dataset/split".
struct MetricReport {
  MacroReport agent;
  std::optional<GroundingEval> grounding;

  nlohmann::ordered_json to_json() const;
  // One row per group with Type / Grounding / SR columns.
  std::string table() const;
};

MetricReport evaluate_steps(const std::vector<AgentStep>& steps,
                            const CustomActionManifest& manifest);

}  // namespace groundkit
