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

#include "groundkit/action.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "groundkit/error.hpp"

namespace groundkit {

namespace {

bool is_name_start(char c) { return (c >= 'A' && c <= 'Z'); }

bool is_name_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool valid_action_name(std::string_view name) {
  if (name.empty() || !is_name_start(name[0])) return false;
  for (char c : name) {
    if (!is_name_char(c)) return false;
  }
  return true;
}

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == ']' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// Cursor over the input with position-reporting failures.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool try_literal(std::string_view lit) {
    if (text_.substr(pos_, lit.size()) == lit) {
      pos_ += lit.size();
      return true;
    }
    return false;
  }

  void expect_literal(std::string_view lit) {
    if (!try_literal(lit)) {
      fail(std::string("expected \"") + std::string(lit) + "\"");
    }
  }

  int parse_coordinate() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos_;
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      fail("expected integer coordinate");
    }
    long value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1000000) fail("coordinate literal too large");
      ++pos_;
    }
    if (neg) value = -value;
    if (value < 0 || value > 1000) {
      throw DataError("coordinate " + std::to_string(value) +
                      " outside [0,1000] (at offset " + std::to_string(start) +
                      ")");
    }
    return static_cast<int>(value);
  }

  std::string parse_name() {
    skip_ws();
    std::size_t start = pos_;
    if (!is_name_start(peek())) fail("expected action name");
    while (is_name_char(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // Bracketed text with backslash escapes: "[a \] b]" -> "a ] b".
  std::string parse_bracket_text() {
    skip_ws();
    expect_literal("[");
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated text argument");
      char c = text_[pos_];
      if (c == '\\') {
        if (pos_ + 1 >= text_.size()) fail("dangling escape");
        char next = text_[pos_ + 1];
        if (next != ']' && next != '\\') fail("unknown escape sequence");
        out.push_back(next);
        pos_ += 2;
        continue;
      }
      if (c == ']') {
        ++pos_;
        return out;
      }
      out.push_back(c);
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ActionParseError(message, pos_);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

Point parse_tagged_point(Cursor& cur) {
  cur.skip_ws();
  cur.expect_literal("<point>");
  cur.skip_ws();
  cur.expect_literal("[[");
  int x = cur.parse_coordinate();
  cur.skip_ws();
  cur.expect_literal(",");
  int y = cur.parse_coordinate();
  cur.skip_ws();
  cur.expect_literal("]]");
  cur.skip_ws();
  cur.expect_literal("</point>");
  return Point{x, y};
}

Box parse_tagged_box(Cursor& cur) {
  cur.skip_ws();
  cur.expect_literal("<box>");
  cur.skip_ws();
  cur.expect_literal("[[");
  int v[4];
  for (int i = 0; i < 4; ++i) {
    v[i] = cur.parse_coordinate();
    cur.skip_ws();
    if (i < 3) cur.expect_literal(",");
  }
  cur.expect_literal("]]");
  cur.skip_ws();
  cur.expect_literal("</box>");
  Box b{v[0], v[1], v[2], v[3]};
  if (!box_valid(b)) throw DataError("box corners out of order");
  return b;
}

// PAIR coordinates: one pair is a point, two pairs a box, both bracketed by
// the box-start/box-end markers.
std::pair<Point, std::optional<Point>> parse_pair_coords(Cursor& cur) {
  cur.skip_ws();
  cur.expect_literal("<|box_start|>");
  auto one = [&cur]() {
    cur.skip_ws();
    cur.expect_literal("(");
    int x = cur.parse_coordinate();
    cur.skip_ws();
    cur.expect_literal(",");
    int y = cur.parse_coordinate();
    cur.skip_ws();
    cur.expect_literal(")");
    return Point{x, y};
  };
  Point first = one();
  std::optional<Point> second;
  cur.skip_ws();
  if (cur.try_literal(",")) {
    second = one();
    cur.skip_ws();
  }
  cur.expect_literal("<|box_end|>");
  return {first, second};
}

Point parse_point_arg(Cursor& cur, Dialect dialect) {
  if (dialect == Dialect::Tagged) return parse_tagged_point(cur);
  auto [first, second] = parse_pair_coords(cur);
  if (second) cur.fail("expected a single coordinate pair");
  return first;
}

Box parse_box_arg(Cursor& cur, Dialect dialect) {
  if (dialect == Dialect::Tagged) return parse_tagged_box(cur);
  auto [first, second] = parse_pair_coords(cur);
  if (!second) cur.fail("expected two coordinate pairs");
  Box b{first.x, first.y, second->x, second->y};
  if (!box_valid(b)) throw DataError("box corners out of order");
  return b;
}

ScrollDirection parse_direction_arg(Cursor& cur) {
  cur.skip_ws();
  cur.expect_literal("[");
  cur.skip_ws();
  std::string word = cur.parse_name();
  cur.skip_ws();
  cur.expect_literal("]");
  auto dir = direction_from_name(word);
  if (!dir) cur.fail("unknown direction \"" + word + "\"");
  return *dir;
}

std::string parse_text_arg(Cursor& cur) { return cur.parse_bracket_text(); }

}  // namespace

std::string_view direction_name(ScrollDirection d) {
  switch (d) {
    case ScrollDirection::Up:
      return "UP";
    case ScrollDirection::Down:
      return "DOWN";
    case ScrollDirection::Left:
      return "LEFT";
    case ScrollDirection::Right:
      return "RIGHT";
  }
  return "UP";
}

std::optional<ScrollDirection> direction_from_name(std::string_view name) {
  if (name == "UP") return ScrollDirection::Up;
  if (name == "DOWN") return ScrollDirection::Down;
  if (name == "LEFT") return ScrollDirection::Left;
  if (name == "RIGHT") return ScrollDirection::Right;
  return std::nullopt;
}

std::string_view UnifiedAction::name() const {
  if (is_click()) return "CLICK";
  if (is_type()) return "TYPE";
  if (is_scroll()) return "SCROLL";
  return as<CustomAction>().name;
}

std::optional<Point> UnifiedAction::point() const {
  if (is_click()) return as<ClickAction>().point;
  if (is_custom()) return as<CustomAction>().point;
  return std::nullopt;
}

std::optional<Box> UnifiedAction::box() const {
  if (is_custom()) return as<CustomAction>().box;
  return std::nullopt;
}

std::optional<std::string_view> UnifiedAction::text() const {
  if (is_type()) return std::string_view(as<TypeAction>().text);
  if (is_custom() && as<CustomAction>().text) {
    return std::string_view(*as<CustomAction>().text);
  }
  return std::nullopt;
}

std::optional<ScrollDirection> UnifiedAction::direction() const {
  if (is_scroll()) return as<ScrollAction>().direction;
  if (is_custom()) return as<CustomAction>().direction;
  return std::nullopt;
}

void validate_action(const UnifiedAction& action) {
  if (action.is_click()) {
    if (!point_valid(action.as<ClickAction>().point)) {
      throw DataError("CLICK point outside [0,1000]");
    }
    return;
  }
  if (action.is_type()) {
    if (action.as<TypeAction>().text.empty()) {
      throw DataError("TYPE text must be non-empty");
    }
    return;
  }
  if (action.is_scroll()) return;
  const auto& c = action.as<CustomAction>();
  if (!valid_action_name(c.name) || c.name == "CLICK" || c.name == "TYPE" ||
      c.name == "SCROLL") {
    throw DataError("invalid custom action name \"" + c.name + "\"");
  }
  if (c.point && !point_valid(*c.point)) {
    throw DataError(c.name + " point outside [0,1000]");
  }
  if (c.box && !box_valid(*c.box)) {
    throw DataError(c.name + " box invalid");
  }
  if (c.text && c.text->empty()) {
    throw DataError(c.name + " text must be non-empty");
  }
}

std::string_view slot_name(ArgSlot slot) {
  switch (slot) {
    case ArgSlot::Point:
      return "point";
    case ArgSlot::Box:
      return "box";
    case ArgSlot::Text:
      return "text";
    case ArgSlot::Direction:
      return "direction";
  }
  return "point";
}

std::optional<ArgSlot> slot_from_name(std::string_view name) {
  if (name == "point") return ArgSlot::Point;
  if (name == "box") return ArgSlot::Box;
  if (name == "text") return ArgSlot::Text;
  if (name == "direction") return ArgSlot::Direction;
  return std::nullopt;
}

CustomActionManifest CustomActionManifest::parse(std::string_view text) {
  CustomActionManifest manifest;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string name;
    if (!(fields >> name)) continue;
    if (!valid_action_name(name)) {
      throw ConfigError("manifest line " + std::to_string(line_no) +
                        ": bad action name \"" + name + "\"");
    }
    std::vector<ArgSlot> slots;
    std::string word;
    while (fields >> word) {
      auto slot = slot_from_name(word);
      if (!slot) {
        throw ConfigError("manifest line " + std::to_string(line_no) +
                          ": unknown slot \"" + word + "\"");
      }
      if (!slots.empty() && static_cast<int>(*slot) <=
                                static_cast<int>(slots.back())) {
        throw ConfigError("manifest line " + std::to_string(line_no) +
                          ": slots must be unique and in canonical order");
      }
      slots.push_back(*slot);
    }
    manifest.declare(name, std::move(slots));
  }
  return manifest;
}

CustomActionManifest CustomActionManifest::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open custom-action manifest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void CustomActionManifest::declare(std::string name,
                                   std::vector<ArgSlot> slots) {
  auto [it, inserted] = actions_.emplace(std::move(name), std::move(slots));
  if (!inserted) {
    throw ConfigError("duplicate custom action \"" + it->first + "\"");
  }
}

void CustomActionManifest::merge(const CustomActionManifest& other) {
  for (const auto& [name, slots] : other.actions_) {
    auto it = actions_.find(name);
    if (it == actions_.end()) {
      actions_.emplace(name, slots);
    } else if (it->second != slots) {
      throw ConfigError("conflicting slot lists for custom action \"" + name +
                        "\"");
    }
  }
}

const std::vector<ArgSlot>* CustomActionManifest::find(
    std::string_view name) const {
  auto it = actions_.find(name);
  return it == actions_.end() ? nullptr : &it->second;
}

std::string_view dialect_name(Dialect d) {
  return d == Dialect::Tagged ? "tagged" : "pair";
}

std::optional<Dialect> dialect_from_name(std::string_view name) {
  if (name == "tagged") return Dialect::Tagged;
  if (name == "pair") return Dialect::Pair;
  return std::nullopt;
}

UnifiedAction parse_action(std::string_view text, Dialect dialect,
                           const CustomActionManifest* manifest) {
  Cursor cur(text);
  std::string name = cur.parse_name();
  UnifiedAction action;
  if (name == "CLICK") {
    action = UnifiedAction::click(parse_point_arg(cur, dialect));
  } else if (name == "TYPE") {
    std::string value = parse_text_arg(cur);
    if (value.empty()) throw DataError("TYPE text must be non-empty");
    action = UnifiedAction::type_text(std::move(value));
  } else if (name == "SCROLL") {
    action = UnifiedAction::scroll(parse_direction_arg(cur));
  } else {
    const std::vector<ArgSlot>* slots =
        manifest ? manifest->find(name) : nullptr;
    if (!slots) {
      throw UnmappedActionError("unknown action \"" + name +
                                "\": not a basic action and not declared in "
                                "the custom-action manifest");
    }
    CustomAction custom;
    custom.name = name;
    for (ArgSlot slot : *slots) {
      switch (slot) {
        case ArgSlot::Point:
          custom.point = parse_point_arg(cur, dialect);
          break;
        case ArgSlot::Box:
          custom.box = parse_box_arg(cur, dialect);
          break;
        case ArgSlot::Text: {
          std::string value = parse_text_arg(cur);
          if (value.empty()) {
            throw DataError(name + " text must be non-empty");
          }
          custom.text = std::move(value);
          break;
        }
        case ArgSlot::Direction:
          custom.direction = parse_direction_arg(cur);
          break;
      }
    }
    action = UnifiedAction::custom(std::move(custom));
  }
  cur.skip_ws();
  if (!cur.at_end()) cur.fail("trailing input after action");
  validate_action(action);
  return action;
}

std::string serialize_point(const Point& p, Dialect dialect) {
  if (dialect == Dialect::Tagged) {
    return "<point>[[" + std::to_string(p.x) + ", " + std::to_string(p.y) +
           "]]</point>";
  }
  return "<|box_start|>(" + std::to_string(p.x) + "," + std::to_string(p.y) +
         ")<|box_end|>";
}

std::string serialize_box(const Box& b, Dialect dialect) {
  if (dialect == Dialect::Tagged) {
    return "<box>[[" + std::to_string(b.x1) + ", " + std::to_string(b.y1) +
           ", " + std::to_string(b.x2) + ", " + std::to_string(b.y2) +
           "]]</box>";
  }
  return "<|box_start|>(" + std::to_string(b.x1) + "," + std::to_string(b.y1) +
         "),(" + std::to_string(b.x2) + "," + std::to_string(b.y2) +
         ")<|box_end|>";
}

std::string serialize_action(const UnifiedAction& action, Dialect dialect) {
  validate_action(action);
  std::string out(action.name());
  if (action.is_click()) {
    out += " " + serialize_point(action.as<ClickAction>().point, dialect);
  } else if (action.is_type()) {
    out += " [" + escape_text(action.as<TypeAction>().text) + "]";
  } else if (action.is_scroll()) {
    out += " [";
    out += direction_name(action.as<ScrollAction>().direction);
    out += "]";
  } else {
    const auto& c = action.as<CustomAction>();
    if (c.point) out += " " + serialize_point(*c.point, dialect);
    if (c.box) out += " " + serialize_box(*c.box, dialect);
    if (c.text) out += " [" + escape_text(*c.text) + "]";
    if (c.direction) {
      out += " [";
      out += direction_name(*c.direction);
      out += "]";
    }
  }
  return out;
}

}  // namespace groundkit
