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
#include <vector>

#include "groundkit/action.hpp"
#include "groundkit/alias.hpp"
#include "groundkit/records.hpp"

namespace groundkit {

// Converts heterogeneous agent datasets into unified-action-space records.
// One adapter per dataset family, defined declaratively (field mappings in a
// file, not code per dataset), so new sources are a config change.

// A raw step as it appears in a source dataset: unresolved action name,
// string-keyed arguments, pixel coordinates in the source screen frame.
struct RawAction {
  std::string name;
  std::map<std::string, std::string> args;
};

struct SourceStep {
  std::string dataset;
  std::string task;
  RawAction action;
  PixelSize screen{};
  std::string screenshot_ref;
  std::vector<RawAction> history;
  std::string split;  // train / test
  std::optional<std::string> thought;
};

// Adapter mapping file (JSON): dataset tag, the field carrying the source
// screen dimensions, per-raw-name canonical mapping plus argument-slot
// rules, and the dataset's custom-action manifest. Arg rules are
// "slot:field[,field...]" pairs joined by ';', e.g.
// "point:x,y" or "box:x1,y1,x2,y2;text:label".
class DatasetAdapter {
 public:
  struct ArgBinding {
    ArgSlot slot;
    std::vector<std::string> fields;
  };

  static DatasetAdapter parse(std::string_view json_text);
  static DatasetAdapter load_file(const std::string& path);

  const std::string& dataset() const { return dataset_; }
  const std::string& screen_field() const { return screen_field_; }
  const CustomActionManifest& custom_actions() const { return custom_actions_; }

  const std::vector<ArgBinding>* bindings(std::string_view raw_name) const;

  // This adapter's raw -> canonical pairs, for merging into a registry.
  void register_aliases(AliasRegistry& registry) const;

  // Parses one source-step JSON line using this adapter's screen field.
  SourceStep step_from_json(const nlohmann::ordered_json& doc) const;

  static std::vector<ArgBinding> parse_arg_rule(std::string_view rule);

 private:
  std::string dataset_;
  std::string screen_field_ = "screen";
  std::map<std::string, std::pair<std::string, std::vector<ArgBinding>>,
           std::less<>>
      actions_;  // raw -> (canonical, bindings)
  CustomActionManifest custom_actions_;
};

// Canonicalizes the raw name through the registry, normalizes pixel
// arguments to per-mille of the source screen, and builds the unified
// action. Errors: unmapped name, missing required argument, coordinates
// outside the source screen.
UnifiedAction unify_action(const RawAction& raw, const PixelSize& screen,
                           const DatasetAdapter& adapter,
                           const AliasRegistry& registry);

// Full step conversion; the history is recursively unified and serialized in
// the TAGGED dialect.
AgentStep unify_step(const SourceStep& step, const DatasetAdapter& adapter,
                     const AliasRegistry& registry);

// Partitions records in order into packs of pack_size (the last pack may be
// smaller) and assigns each pack a prefix prompt drawn seeded-uniformly from
// a pool of prompt_pool prompts. flatten(packs) == records.
std::vector<ConversationPack> pack_conversations(
    const std::vector<GroundingRecord>& records, int pack_size,
    int prompt_pool, std::uint64_t seed);

// The three grounding formats a REG sample can be cast into.
enum class RegVariant { Point, Box, Ocr };

std::string_view variant_name(RegVariant variant);

// Instruction template pools, one per variant. Point and box templates use
// {expr}; OCR templates use {target} (the serialized query coordinates).
struct VariantTemplates {
  std::vector<std::string> point;
  std::vector<std::string> box;
  std::vector<std::string> ocr;

  static VariantTemplates load(const std::string& point_path,
                               const std::string& box_path,
                               const std::string& ocr_path);
};

// Casts a box-bearing REG record into the given variant:
//   point - target becomes the box center;
//   box   - target box unchanged;
//   ocr   - the coordinates become the query and the expression the answer.
// The instruction is wrapped with the template at template_id.
GroundingRecord variantize_reg_as(const GroundingRecord& record,
                                  RegVariant variant, int template_id,
                                  const VariantTemplates& templates);

// Seeded single-record form: the variant and template are drawn from the
// seed.
GroundingRecord variantize_reg(const GroundingRecord& record,
                               std::uint64_t seed,
                               const VariantTemplates& templates);

// Corpus form: variants rotate point/box/ocr across records from a seeded
// starting phase, templates drawn from one seeded stream.
std::vector<GroundingRecord> variantize_corpus(
    const std::vector<GroundingRecord>& records, std::uint64_t seed,
    const VariantTemplates& templates);

}  // namespace groundkit
