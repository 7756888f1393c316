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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "groundkit/geometry.hpp"

namespace groundkit {

// The unified action space: three basic actions shared by every platform
// (CLICK, TYPE, SCROLL) plus per-dataset custom actions declared in a
// manifest. Values are immutable after construction; parse and serialize are
// pure and safe for concurrent use.

enum class ScrollDirection { Up, Down, Left, Right };

std::string_view direction_name(ScrollDirection d);
std::optional<ScrollDirection> direction_from_name(std::string_view name);

struct ClickAction {
  Point point;

  bool operator==(const ClickAction&) const = default;
};

struct TypeAction {
  std::string text;  // never empty

  bool operator==(const TypeAction&) const = default;
};

struct ScrollAction {
  ScrollDirection direction = ScrollDirection::Up;

  bool operator==(const ScrollAction&) const = default;
};

// `name` is always a canonical (post-alias) identifier. Which argument slots
// are populated is fixed per name by the dataset's custom-action manifest.
struct CustomAction {
  std::string name;
  std::optional<Point> point;
  std::optional<Box> box;
  std::optional<std::string> text;
  std::optional<ScrollDirection> direction;

  bool operator==(const CustomAction&) const = default;
};

class UnifiedAction {
 public:
  using Value =
      std::variant<ClickAction, TypeAction, ScrollAction, CustomAction>;

  UnifiedAction() : value_(ClickAction{}) {}
  explicit UnifiedAction(Value v) : value_(std::move(v)) {}

  static UnifiedAction click(Point p) { return UnifiedAction(ClickAction{p}); }
  static UnifiedAction type_text(std::string text) {
    return UnifiedAction(TypeAction{std::move(text)});
  }
  static UnifiedAction scroll(ScrollDirection d) {
    return UnifiedAction(ScrollAction{d});
  }
  static UnifiedAction custom(CustomAction c) {
    return UnifiedAction(std::move(c));
  }

  const Value& value() const { return value_; }

  bool is_click() const { return std::holds_alternative<ClickAction>(value_); }
  bool is_type() const { return std::holds_alternative<TypeAction>(value_); }
  bool is_scroll() const {
    return std::holds_alternative<ScrollAction>(value_);
  }
  bool is_custom() const {
    return std::holds_alternative<CustomAction>(value_);
  }

  template <typename T>
  const T& as() const {
    return std::get<T>(value_);
  }

  // CLICK / TYPE / SCROLL or the custom action's canonical name.
  std::string_view name() const;

  // The coordinate argument, if any: a click's point, or a custom point.
  std::optional<Point> point() const;
  std::optional<Box> box() const;
  std::optional<std::string_view> text() const;
  std::optional<ScrollDirection> direction() const;

  bool operator==(const UnifiedAction&) const = default;

 private:
  Value value_;
};

// Throws DataError when an action violates its invariants (out-of-range
// coordinates, empty TYPE text, malformed custom name).
void validate_action(const UnifiedAction& action);

// Argument slots a custom action may declare, in the fixed order they appear
// in serialized form.
enum class ArgSlot { Point, Box, Text, Direction };

std::string_view slot_name(ArgSlot slot);
std::optional<ArgSlot> slot_from_name(std::string_view name);

// Declares which custom action names a dataset may use and the argument
// slots each one requires. Undeclared custom names are parse errors: custom
// actions exist to let users define new ones, so acceptance is by
// declaration, not hard-coding.
class CustomActionManifest {
 public:
  CustomActionManifest() = default;

  // One action per line: NAME [slot...]. Slots must be listed in canonical
  // order (point, box, text, direction). '#' starts a comment.
  static CustomActionManifest parse(std::string_view text);
  static CustomActionManifest load_file(const std::string& path);

  void declare(std::string name, std::vector<ArgSlot> slots);

  // Fails on conflicting slot lists for the same name.
  void merge(const CustomActionManifest& other);

  const std::vector<ArgSlot>* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  const std::map<std::string, std::vector<ArgSlot>, std::less<>>& actions()
      const {
    return actions_;
  }

 private:
  std::map<std::string, std::vector<ArgSlot>, std::less<>> actions_;
};

// The two serialization dialects. They differ only in coordinate markup:
//
//   TAGGED  CLICK <point>[[101, 872]]</point>
//           DRAG <box>[[10, 20, 30, 40]]</box>
//   PAIR    CLICK <|box_start|>(101,872)<|box_end|>
//           DRAG <|box_start|>(10,20),(30,40)<|box_end|>
//
// Text arguments are bracketed ("TYPE [Shanghai shopping mall]") with ']'
// and '\' escaped as "\]" and "\\"; directions are bracketed keywords
// ("SCROLL [UP]"). parse(serialize(a, d), d) == a for every valid action.
enum class Dialect { Tagged, Pair };

std::string_view dialect_name(Dialect d);
std::optional<Dialect> dialect_from_name(std::string_view name);

// Parses a single action expression. Custom action names must be declared in
// `manifest` (pass nullptr to accept basic actions only). Whitespace between
// tokens and inside coordinate lists is insignificant.
//
// Throws ActionParseError (with byte offset) on syntax errors, DataError on
// out-of-range coordinates, UnmappedActionError on undeclared custom names.
UnifiedAction parse_action(std::string_view text, Dialect dialect,
                           const CustomActionManifest* manifest = nullptr);

// Total on valid actions; canonical spacing, round-trips under parse_action.
std::string serialize_action(const UnifiedAction& action, Dialect dialect);

std::string serialize_point(const Point& p, Dialect dialect);
std::string serialize_box(const Box& b, Dialect dialect);

}  // namespace groundkit
