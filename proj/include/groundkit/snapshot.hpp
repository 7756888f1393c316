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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "groundkit/geometry.hpp"

namespace groundkit {

// A serialized interface snapshot: one self-describing tree document per
// page (web DOM dump or desktop/mobile accessibility tree), decoupled from
// any live browser or OS. Screenshots are opaque references keyed by
// snapshot id + window index; no pixels flow through here.

enum class Platform { Web, Windows, Linux, Macos, Android };

std::string_view platform_name(Platform p);

struct NodeTree {
  std::string role;
  std::string name;   // accessible name; empty = absent
  std::string title;  // title attribute; empty = absent
  std::string text;   // trimmed inner text; empty = absent
  std::map<std::string, std::string> attributes;
  PixelBox bbox{};
  bool visible = true;
  std::vector<NodeTree> children;
};

struct PageSnapshot {
  std::string id;
  Platform platform = Platform::Web;
  PixelSize page_size{};
  PixelSize viewport{};
  NodeTree root;
};

// Parses and validates one snapshot document (see docs/formats.md for the
// schema). Node boxes that spill past the page are clamped, with a warning
// recorded per clamp. Malformed input fails with a path-addressed message
// ("root.children[2].bbox: ...").
//
// Subtrees may be reused by reference ({"ref": "node-id"}); a ref that
// resolves to a still-open ancestor is a cycle and is rejected.
PageSnapshot parse_snapshot(std::string_view json_text,
                            std::vector<std::string>* warnings = nullptr);

std::string serialize_snapshot(const PageSnapshot& snapshot);

// An interactable node surfaced for grounding: where it is (pixel box in the
// page frame, index path from the root) and how a person would refer to it.
struct Element {
  std::vector<int> node_path;
  std::string role;
  std::string expr;  // referring expression, never whitespace-only
  PixelBox bbox;     // clamped to page bounds, positive area

  bool operator==(const Element&) const = default;
};

std::string node_path_string(const std::vector<int>& path);
std::vector<int> node_path_parse(std::string_view text);

struct ExtractConfig {
  // Roles worth grounding. The set is open: snapshots use free-form role
  // strings, so deployments extend this per platform.
  std::set<std::string, std::less<>> interactable_roles = {
      "button",   "link",     "scrollbar", "searchbox", "textbox",
      "checkbox", "combobox", "menuitem",  "tab",       "svg"};
  // SVG images qualify only when titled.
  std::string svg_role = "svg";
};

// Walks the tree in depth-first document order and returns the visible,
// interactable nodes that yield a non-empty referring expression.
// Expression precedence: accessible name, then title, then trimmed inner
// text, then aria-label. Deterministic: identical snapshots give identical
// lists.
std::vector<Element> extract_elements(const PageSnapshot& snapshot,
                                      const ExtractConfig& config = {});

// Error-page detection patterns: one per line, either a case-insensitive
// substring or, with the "re:" prefix, an anchored case-insensitive regex.
class ErrorPagePatterns {
 public:
  ErrorPagePatterns() = default;

  static ErrorPagePatterns parse(std::string_view text);
  static ErrorPagePatterns load_file(const std::string& path);

  bool matches(std::string_view text) const;
  std::size_t size() const;

 private:
  struct Pattern;
  std::vector<Pattern> patterns_;

 public:
  ~ErrorPagePatterns();
  ErrorPagePatterns(const ErrorPagePatterns&);
  ErrorPagePatterns(ErrorPagePatterns&&) noexcept;
  ErrorPagePatterns& operator=(const ErrorPagePatterns&);
  ErrorPagePatterns& operator=(ErrorPagePatterns&&) noexcept;
};

// True when the page title or any node text matches an error pattern
// (HTTP status tokens, "not found" phrasings, ...).
bool is_error_page(const PageSnapshot& snapshot,
                   const ErrorPagePatterns& patterns);

}  // namespace groundkit
