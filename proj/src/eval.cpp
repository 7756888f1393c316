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

#include "groundkit/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

#include <boost/rational.hpp>

#include "groundkit/error.hpp"
#include "groundkit/rng.hpp"

namespace groundkit {

namespace {

// The 14%-of-screen-width click threshold as an exact rational.
constexpr std::int64_t kClickNum = 14;
constexpr std::int64_t kClickDen = 100;

std::vector<std::string> f1_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// Multiset token overlap and the two sizes; everything downstream of F1 is
// derived from these three integers.
struct OverlapCounts {
  std::int64_t overlap = 0;
  std::int64_t pred_size = 0;
  std::int64_t gt_size = 0;
};

OverlapCounts token_overlap(std::string_view pred, std::string_view gt) {
  auto pred_tokens = f1_tokens(pred);
  auto gt_tokens = f1_tokens(gt);
  std::map<std::string, std::int64_t> counts;
  for (const auto& token : gt_tokens) ++counts[token];
  std::int64_t overlap = 0;
  for (const auto& token : pred_tokens) {
    auto it = counts.find(token);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return OverlapCounts{overlap, static_cast<std::int64_t>(pred_tokens.size()),
                       static_cast<std::int64_t>(gt_tokens.size())};
}

using Rational = boost::rational<std::int64_t>;

double ratio(long num, long den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

bool point_in_box(const Point& pred, const Box& gt) {
  return pred.x >= gt.x1 && pred.x <= gt.x2 && pred.y >= gt.y1 &&
         pred.y <= gt.y2;
}

double iou(const Box& a, const Box& b) {
  const std::int64_t ix1 = std::max(a.x1, b.x1);
  const std::int64_t iy1 = std::max(a.y1, b.y1);
  const std::int64_t ix2 = std::min(a.x2, b.x2);
  const std::int64_t iy2 = std::min(a.y2, b.y2);
  const std::int64_t iw = std::max<std::int64_t>(0, ix2 - ix1);
  const std::int64_t ih = std::max<std::int64_t>(0, iy2 - iy1);
  const std::int64_t intersection = iw * ih;
  const std::int64_t union_area = box_area(a) + box_area(b) - intersection;
  if (union_area == 0) {
    // Two identical degenerate points overlap perfectly; anything else with
    // no union area does not overlap at all.
    bool a_is_point = a.x1 == a.x2 && a.y1 == a.y2;
    return (a_is_point && a == b) ? 1.0 : 0.0;
  }
  return static_cast<double>(intersection) / static_cast<double>(union_area);
}

bool click_correct(const Point& pred, const Point& gt,
                   const PixelSize& screen) {
  if (screen.width < 1 || screen.height < 1) {
    throw DataError("screen dimensions must be positive");
  }
  // distance <= (14/100) * width, with pixel deltas dx = dpm_x * W / 1000,
  // dy = dpm_y * H / 1000. Clearing denominators:
  //   (dpm_x * W)^2 + (dpm_y * H)^2 <= (14/100 * W * 1000)^2
  // i.e. dist2 <= (140 * W)^2. Magnitudes stay well inside int64 for any
  // realistic screen (|dpm| <= 1000, W,H <= ~10^6).
  const std::int64_t dx = (pred.x - gt.x) * screen.width;
  const std::int64_t dy = (pred.y - gt.y) * screen.height;
  const std::int64_t limit = kClickNum * 10 * screen.width;  // 140 * W
  return dx * dx + dy * dy <= limit * limit;
}

double token_f1(std::string_view pred, std::string_view gt) {
  OverlapCounts c = token_overlap(pred, gt);
  if (c.pred_size == 0 && c.gt_size == 0) return 1.0;
  if (c.overlap == 0) return 0.0;
  // F1 = 2PR/(P+R) = 2*overlap / (pred_size + gt_size).
  return 2.0 * static_cast<double>(c.overlap) /
         static_cast<double>(c.pred_size + c.gt_size);
}

bool text_correct(std::string_view pred, std::string_view gt) {
  OverlapCounts c = token_overlap(pred, gt);
  if (c.pred_size == 0 && c.gt_size == 0) return true;
  // F1 > 1/2  <=>  4 * overlap > pred_size + gt_size, exactly.
  return 4 * c.overlap > c.pred_size + c.gt_size;
}

StepVerdict step_success(const UnifiedAction& pred, const UnifiedAction& gt,
                         const PixelSize& screen) {
  StepVerdict verdict;
  verdict.type_match = pred.name() == gt.name();

  bool args_ok = false;
  if (auto gt_point = gt.point()) {
    auto pred_point = pred.point();
    bool hit = pred_point && click_correct(*pred_point, *gt_point, screen);
    verdict.grounding_match = hit;
    args_ok = hit;
  } else if (auto gt_text = gt.text()) {
    auto pred_text = pred.text();
    args_ok = pred_text && text_correct(*pred_text, *gt_text);
  } else if (gt.is_scroll()) {
    args_ok = pred.is_scroll() && pred.as<ScrollAction>().direction ==
                                      gt.as<ScrollAction>().direction;
  } else {
    // PRESS_BACK and friends, and box-bearing customs: exact match.
    args_ok = pred == gt;
  }
  verdict.success = verdict.type_match && args_ok;
  return verdict;
}

double AgentEval::type_em() const { return ratio(type_matches, n); }
double AgentEval::grounding() const { return ratio(grounding_matches, grounding_n); }
double AgentEval::sr() const { return ratio(successes, n); }

AgentEval aggregate(const std::vector<StepVerdict>& verdicts) {
  if (verdicts.empty()) {
    throw DataError("cannot aggregate an empty evaluation");
  }
  AgentEval eval;
  for (const auto& verdict : verdicts) {
    ++eval.n;
    if (verdict.type_match) ++eval.type_matches;
    if (verdict.success) ++eval.successes;
    if (verdict.grounding_match.has_value()) {
      ++eval.grounding_n;
      if (*verdict.grounding_match) ++eval.grounding_matches;
    }
  }
  return eval;
}

MacroReport aggregate_macro(const std::map<std::string, AgentEval>& splits) {
  if (splits.empty()) {
    throw DataError("cannot macro-average an empty split map");
  }
  MacroReport report;
  report.splits = splits;
  // Exact rational accumulation: the mean of {1/5, 2/5, 3/5, 4/5} must come
  // out as exactly 0.5, which naive double summation does not give.
  Rational type_sum(0), grounding_sum(0), sr_sum(0);
  for (const auto& [name, eval] : splits) {
    if (eval.n < 1) {
      throw DataError("split \"" + name + "\" is empty");
    }
    type_sum += Rational(eval.type_matches, eval.n);
    sr_sum += Rational(eval.successes, eval.n);
    if (eval.grounding_n > 0) {
      grounding_sum += Rational(eval.grounding_matches, eval.grounding_n);
    }
  }
  const auto k = static_cast<std::int64_t>(splits.size());
  auto to_double = [](const Rational& r) {
    return static_cast<double>(r.numerator()) /
           static_cast<double>(r.denominator());
  };
  report.macro_type_em = to_double(type_sum / k);
  report.macro_grounding = to_double(grounding_sum / k);
  report.macro_sr = to_double(sr_sum / k);
  return report;
}

double GroundingEval::accuracy() const { return ratio(hits, n); }
double GroundingEval::mean_iou() const {
  return iou_n == 0 ? 0.0 : iou_sum / static_cast<double>(iou_n);
}

GroundingEval evaluate_grounding(const std::vector<GroundingRecord>& records) {
  GroundingEval eval;
  for (const auto& record : records) {
    if (!record.target_box && !record.target_point) continue;
    std::optional<Point> pred = record.predicted_point;
    if (!pred && record.predicted_box) {
      // Box-predicting models are scored by their box center.
      pred = box_center(*record.predicted_box);
    }
    if (!pred) continue;
    ++eval.n;
    if (record.target_box) {
      if (point_in_box(*pred, *record.target_box)) ++eval.hits;
      if (record.predicted_box) {
        ++eval.iou_n;
        eval.iou_sum += iou(*record.predicted_box, *record.target_box);
      }
    } else if (*pred == *record.target_point) {
      ++eval.hits;
    }
  }
  return eval;
}

std::optional<PredictorKind> predictor_from_name(std::string_view name) {
  if (name == "gt-echo") return PredictorKind::GtEcho;
  if (name == "constant-click") return PredictorKind::ConstantClick;
  if (name == "random-seeded") return PredictorKind::RandomSeeded;
  return std::nullopt;
}

namespace {

std::string random_action_text(SplitMix64& rng) {
  switch (rng.bounded(3)) {
    case 0: {
      Point p{static_cast<int>(rng.bounded(1001)),
              static_cast<int>(rng.bounded(1001))};
      return serialize_action(UnifiedAction::click(p), Dialect::Tagged);
    }
    case 1: {
      static constexpr const char* kWords[] = {"open", "settings", "search",
                                               "home", "menu", "cart"};
      std::string text = kWords[rng.bounded(6)];
      text += ' ';
      text += kWords[rng.bounded(6)];
      return serialize_action(UnifiedAction::type_text(text), Dialect::Tagged);
    }
    default: {
      auto dir = static_cast<ScrollDirection>(rng.bounded(4));
      return serialize_action(UnifiedAction::scroll(dir), Dialect::Tagged);
    }
  }
}

}  // namespace

void fill_predictions(std::vector<AgentStep>& steps, PredictorKind kind,
                      std::uint64_t seed) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto& step = steps[i];
    if (step.predicted_action) continue;
    switch (kind) {
      case PredictorKind::GtEcho:
        step.predicted_action = step.gt_action;
        break;
      case PredictorKind::ConstantClick:
        step.predicted_action = serialize_action(
            UnifiedAction::click(Point{500, 500}), Dialect::Tagged);
        break;
      case PredictorKind::RandomSeeded: {
        SplitMix64 rng(derive_seed(seed, "predict/" + std::to_string(i)));
        step.predicted_action = random_action_text(rng);
        break;
      }
    }
  }
}

void fill_grounding_predictions(std::vector<GroundingRecord>& records,
                                PredictorKind kind, std::uint64_t seed) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& record = records[i];
    if (record.predicted_point || record.predicted_box) continue;
    switch (kind) {
      case PredictorKind::GtEcho:
        if (record.target_box) {
          record.predicted_box = record.target_box;
        } else if (record.target_point) {
          record.predicted_point = record.target_point;
        }
        break;
      case PredictorKind::ConstantClick:
        record.predicted_point = Point{500, 500};
        break;
      case PredictorKind::RandomSeeded: {
        SplitMix64 rng(derive_seed(seed, "ground/" + std::to_string(i)));
        record.predicted_point = Point{static_cast<int>(rng.bounded(1001)),
                                       static_cast<int>(rng.bounded(1001))};
        break;
      }
    }
  }
}

nlohmann::ordered_json MetricReport::to_json() const {
  nlohmann::ordered_json out;
  out["schema"] = std::string(schemas::kMetricReport);
  nlohmann::ordered_json groups;
  for (const auto& [name, eval] : agent.splits) {
    nlohmann::ordered_json g;
    g["n"] = eval.n;
    g["type"] = eval.type_em();
    g["grounding"] = eval.grounding();
    g["grounding_n"] = eval.grounding_n;
    g["sr"] = eval.sr();
    groups[name] = g;
  }
  out["groups"] = groups;
  out["macro"] = {{"type", agent.macro_type_em},
                  {"grounding", agent.macro_grounding},
                  {"sr", agent.macro_sr}};
  // The Grounding column's denominator is point-bearing ground truths only.
  out["grounding_denominator"] = "steps with point-bearing ground truth";
  if (grounding) {
    out["grounding_eval"] = {{"n", grounding->n},
                             {"accuracy", grounding->accuracy()},
                             {"mean_iou", grounding->mean_iou()},
                             {"iou_n", grounding->iou_n}};
  }
  return out;
}

std::string MetricReport::table() const {
  std::string out =
      "dataset/split                      Type  Grounding         SR\n";
  char row[160];
  for (const auto& [name, eval] : agent.splits) {
    std::snprintf(row, sizeof(row), "%-30s %9.4f %10.4f %10.4f\n",
                  name.c_str(), eval.type_em(), eval.grounding(), eval.sr());
    out += row;
  }
  std::snprintf(row, sizeof(row), "%-30s %9.4f %10.4f %10.4f\n", "macro",
                agent.macro_type_em, agent.macro_grounding, agent.macro_sr);
  out += row;
  return out;
}

StepVerdict evaluate_step(const AgentStep& step,
                          const CustomActionManifest& manifest) {
  UnifiedAction gt = parse_action(step.gt_action, Dialect::Tagged, &manifest);
  StepVerdict verdict;
  if (step.predicted_action) {
    try {
      UnifiedAction pred =
          parse_action(*step.predicted_action, Dialect::Tagged, &manifest);
      return step_success(pred, gt, step.screen);
    } catch (const DataError&) {
      // Unparseable prediction: a miss, with grounding still defined for
      // point-bearing ground truths.
    }
  }
  if (gt.point()) verdict.grounding_match = false;
  return verdict;
}

MetricReport evaluate_steps(const std::vector<AgentStep>& steps,
                            const CustomActionManifest& manifest) {
  if (steps.empty()) throw DataError("no steps to evaluate");
  std::map<std::string, std::vector<StepVerdict>> verdicts_by_group;
  for (const auto& step : steps) {
    std::string group = step.dataset.empty() ? "default" : step.dataset;
    if (!step.split.empty()) group += "/" + step.split;
    verdicts_by_group[group].push_back(evaluate_step(step, manifest));
  }

  std::map<std::string, AgentEval> splits;
  for (const auto& [group, verdicts] : verdicts_by_group) {
    splits.emplace(group, aggregate(verdicts));
  }
  MetricReport report;
  report.agent = aggregate_macro(splits);
  return report;
}

}  // namespace groundkit
