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

#include "groundkit/snapshot.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "groundkit/error.hpp"
#include "groundkit/records.hpp"

namespace groundkit {

namespace {

using nlohmann::ordered_json;

std::string trimmed(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return std::string(s.substr(begin, end - begin));
}

std::string lowered(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::optional<Platform> platform_from_name(std::string_view name) {
  if (name == "web") return Platform::Web;
  if (name == "windows") return Platform::Windows;
  if (name == "linux") return Platform::Linux;
  if (name == "macos") return Platform::Macos;
  if (name == "android") return Platform::Android;
  return std::nullopt;
}

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
  throw DataError(path + ": " + what);
}

std::int64_t int_field(const ordered_json& obj, const char* key,
                       const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    fail_at(path + "." + key, "expected integer field");
  }
  return it->get<std::int64_t>();
}

PixelSize size_field(const ordered_json& obj, const char* key,
                     const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_object()) {
    fail_at(path + "." + key, "expected {width, height} object");
  }
  PixelSize size{int_field(*it, "width", path + "." + key),
                 int_field(*it, "height", path + "." + key)};
  if (size.width < 1 || size.height < 1) {
    fail_at(path + "." + key, "dimensions must be positive");
  }
  return size;
}

PixelBox bbox_field(const ordered_json& obj, const std::string& path) {
  auto it = obj.find("bbox");
  if (it == obj.end() || !it->is_array() || it->size() != 4) {
    fail_at(path + ".bbox", "expected [x1, y1, x2, y2]");
  }
  std::int64_t v[4];
  for (int i = 0; i < 4; ++i) {
    if (!(*it)[i].is_number_integer()) {
      fail_at(path + ".bbox", "expected integer coordinates");
    }
    v[i] = (*it)[i].get<std::int64_t>();
  }
  PixelBox box{v[0], v[1], v[2], v[3]};
  if (box.x2 < box.x1 || box.y2 < box.y1) {
    fail_at(path + ".bbox", "negative geometry (inverted corners)");
  }
  return box;
}

// Tracks ids for by-reference subtree reuse and catches reference cycles.
struct NodeParser {
  const PageSnapshot* page = nullptr;
  std::map<std::string, NodeTree> by_id;
  std::set<std::string> open_ids;

  NodeTree parse(const ordered_json& obj, const std::string& path) {
    if (!obj.is_object()) fail_at(path, "expected node object");

    if (auto ref = obj.find("ref"); ref != obj.end()) {
      if (!ref->is_string()) fail_at(path + ".ref", "expected node id string");
      std::string id = ref->get<std::string>();
      if (open_ids.count(id)) {
        fail_at(path, "cyclic reference to node \"" + id + "\"");
      }
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        fail_at(path, "reference to unknown node \"" + id + "\"");
      }
      return it->second;
    }

    NodeTree node;
    std::string id;
    if (auto f = obj.find("id"); f != obj.end()) {
      if (!f->is_string()) fail_at(path + ".id", "expected string");
      id = f->get<std::string>();
      if (by_id.count(id) || open_ids.count(id)) {
        fail_at(path + ".id", "duplicate node id \"" + id + "\"");
      }
      open_ids.insert(id);
    }

    auto role = obj.find("role");
    if (role == obj.end() || !role->is_string()) {
      fail_at(path + ".role", "expected string field");
    }
    node.role = role->get<std::string>();

    auto str_field = [&](const char* key, std::string& out) {
      if (auto f = obj.find(key); f != obj.end()) {
        if (!f->is_string()) fail_at(path + "." + key, "expected string");
        out = f->get<std::string>();
      }
    };
    str_field("name", node.name);
    str_field("title", node.title);
    str_field("text", node.text);

    if (auto attrs = obj.find("attributes"); attrs != obj.end()) {
      if (!attrs->is_object()) {
        fail_at(path + ".attributes", "expected string map");
      }
      for (auto& [key, value] : attrs->items()) {
        if (!value.is_string()) {
          fail_at(path + ".attributes." + key, "expected string");
        }
        node.attributes[key] = value.get<std::string>();
      }
    }

    node.bbox = bbox_field(obj, path);
    if (auto vis = obj.find("visible"); vis != obj.end()) {
      if (!vis->is_boolean()) fail_at(path + ".visible", "expected boolean");
      node.visible = vis->get<bool>();
    }

    if (auto children = obj.find("children"); children != obj.end()) {
      if (!children->is_array()) {
        fail_at(path + ".children", "expected array");
      }
      int index = 0;
      for (const auto& child : *children) {
        node.children.push_back(
            parse(child, path + ".children[" + std::to_string(index) + "]"));
        ++index;
      }
    }

    if (!id.empty()) {
      open_ids.erase(id);
      by_id.emplace(std::move(id), node);
    }
    return node;
  }
};

void clamp_boxes(NodeTree& node, const PixelSize& page, const std::string& path,
                 std::vector<std::string>* warnings) {
  PixelBox original = node.bbox;
  node.bbox.x1 = std::clamp<std::int64_t>(node.bbox.x1, 0, page.width);
  node.bbox.x2 = std::clamp<std::int64_t>(node.bbox.x2, 0, page.width);
  node.bbox.y1 = std::clamp<std::int64_t>(node.bbox.y1, 0, page.height);
  node.bbox.y2 = std::clamp<std::int64_t>(node.bbox.y2, 0, page.height);
  if (warnings && !(original == node.bbox)) {
    warnings->push_back(path + ".bbox clamped to page bounds");
  }
  int index = 0;
  for (auto& child : node.children) {
    clamp_boxes(child, page, path + ".children[" + std::to_string(index) + "]",
                warnings);
    ++index;
  }
}

ordered_json node_to_json(const NodeTree& node) {
  ordered_json out;
  out["role"] = node.role;
  if (!node.name.empty()) out["name"] = node.name;
  if (!node.title.empty()) out["title"] = node.title;
  if (!node.text.empty()) out["text"] = node.text;
  if (!node.attributes.empty()) {
    ordered_json attrs;
    for (const auto& [key, value] : node.attributes) attrs[key] = value;
    out["attributes"] = attrs;
  }
  out["bbox"] = {node.bbox.x1, node.bbox.y1, node.bbox.x2, node.bbox.y2};
  if (!node.visible) out["visible"] = false;
  if (!node.children.empty()) {
    ordered_json children = ordered_json::array();
    for (const auto& child : node.children) {
      children.push_back(node_to_json(child));
    }
    out["children"] = children;
  }
  return out;
}

void collect_text(const NodeTree& node, std::string& out) {
  for (const std::string* field : {&node.name, &node.title, &node.text}) {
    if (!field->empty()) {
      out += lowered(*field);
      out += '\n';
    }
  }
  for (const auto& child : node.children) collect_text(child, out);
}

}  // namespace

std::string_view platform_name(Platform p) {
  switch (p) {
    case Platform::Web:
      return "web";
    case Platform::Windows:
      return "windows";
    case Platform::Linux:
      return "linux";
    case Platform::Macos:
      return "macos";
    case Platform::Android:
      return "android";
  }
  return "web";
}

PageSnapshot parse_snapshot(std::string_view json_text,
                            std::vector<std::string>* warnings) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("snapshot is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("snapshot: expected JSON object");
  if (auto schema = doc.find("schema");
      schema == doc.end() || !schema->is_string() ||
      schema->get<std::string>() != schemas::kSnapshot) {
    throw DataError(std::string("snapshot: missing or unsupported schema, "
                                "expected \"") +
                    std::string(schemas::kSnapshot) + "\"");
  }

  PageSnapshot snapshot;
  auto id = doc.find("id");
  if (id == doc.end() || !id->is_string() || id->get<std::string>().empty()) {
    fail_at("id", "expected non-empty string");
  }
  snapshot.id = id->get<std::string>();

  auto platform = doc.find("platform");
  if (platform == doc.end() || !platform->is_string()) {
    fail_at("platform", "expected string");
  }
  auto parsed_platform = platform_from_name(platform->get<std::string>());
  if (!parsed_platform) {
    fail_at("platform", "unknown platform \"" + platform->get<std::string>() +
                            "\"");
  }
  snapshot.platform = *parsed_platform;

  snapshot.page_size = size_field(doc, "page", "");
  snapshot.viewport = size_field(doc, "viewport", "");
  if (snapshot.viewport.width > snapshot.page_size.width ||
      snapshot.viewport.height > snapshot.page_size.height) {
    fail_at("viewport", "viewport exceeds page size");
  }

  auto root = doc.find("root");
  if (root == doc.end()) fail_at("root", "missing node tree");
  NodeParser parser;
  snapshot.root = parser.parse(*root, "root");
  clamp_boxes(snapshot.root, snapshot.page_size, "root", warnings);
  return snapshot;
}

std::string serialize_snapshot(const PageSnapshot& snapshot) {
  ordered_json out;
  out["schema"] = std::string(schemas::kSnapshot);
  out["id"] = snapshot.id;
  out["platform"] = std::string(platform_name(snapshot.platform));
  out["page"] = {{"width", snapshot.page_size.width},
                 {"height", snapshot.page_size.height}};
  out["viewport"] = {{"width", snapshot.viewport.width},
                     {"height", snapshot.viewport.height}};
  out["root"] = node_to_json(snapshot.root);
  return out.dump();
}

std::string node_path_string(const std::vector<int>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '/';
    out += std::to_string(path[i]);
  }
  return out;
}

std::vector<int> node_path_parse(std::string_view text) {
  std::vector<int> path;
  if (text.empty()) return path;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t slash = text.find('/', start);
    std::string_view part = text.substr(
        start, slash == std::string_view::npos ? std::string_view::npos
                                               : slash - start);
    if (part.empty()) throw DataError("malformed node path");
    int value = 0;
    for (char c : part) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw DataError("malformed node path");
      }
      value = value * 10 + (c - '0');
    }
    path.push_back(value);
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return path;
}

namespace {

std::string referring_expression(const NodeTree& node) {
  for (const std::string* candidate : {&node.name, &node.title, &node.text}) {
    std::string value = trimmed(*candidate);
    if (!value.empty()) return value;
  }
  if (auto it = node.attributes.find("aria-label");
      it != node.attributes.end()) {
    std::string value = trimmed(it->second);
    if (!value.empty()) return value;
  }
  return {};
}

void extract_walk(const NodeTree& node, std::vector<int>& path,
                  const ExtractConfig& config, std::vector<Element>& out) {
  bool role_ok = config.interactable_roles.count(node.role) > 0;
  if (role_ok && node.role == config.svg_role) {
    // SVG images qualify only with a title.
    std::string title = trimmed(node.title);
    if (title.empty()) {
      auto it = node.attributes.find("title");
      if (it != node.attributes.end()) title = trimmed(it->second);
    }
    role_ok = !title.empty();
  }
  if (role_ok && node.visible && pixel_box_area(node.bbox) > 0) {
    std::string expr = referring_expression(node);
    if (!expr.empty()) {
      out.push_back(Element{path, node.role, std::move(expr), node.bbox});
    }
  }
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    extract_walk(node.children[i], path, config, out);
    path.pop_back();
  }
}

}  // namespace

std::vector<Element> extract_elements(const PageSnapshot& snapshot,
                                      const ExtractConfig& config) {
  std::vector<Element> elements;
  std::vector<int> path;
  extract_walk(snapshot.root, path, config, elements);
  return elements;
}

struct ErrorPagePatterns::Pattern {
  std::string source;
  bool is_regex = false;
  std::string substring;  // lowercased, for substring patterns
  std::regex regex;
};

ErrorPagePatterns::~ErrorPagePatterns() = default;
ErrorPagePatterns::ErrorPagePatterns(const ErrorPagePatterns&) = default;
ErrorPagePatterns::ErrorPagePatterns(ErrorPagePatterns&&) noexcept = default;
ErrorPagePatterns& ErrorPagePatterns::operator=(const ErrorPagePatterns&) =
    default;
ErrorPagePatterns& ErrorPagePatterns::operator=(ErrorPagePatterns&&) noexcept =
    default;

ErrorPagePatterns ErrorPagePatterns::parse(std::string_view text) {
  ErrorPagePatterns result;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    std::string value = trimmed(line);
    if (value.empty() || value[0] == '#') continue;
    Pattern pattern;
    pattern.source = value;
    if (value.rfind("re:", 0) == 0) {
      pattern.is_regex = true;
      try {
        pattern.regex = std::regex(value.substr(3),
                                   std::regex::ECMAScript | std::regex::icase);
      } catch (const std::regex_error& e) {
        throw ConfigError("error-page pattern line " +
                          std::to_string(line_no) + ": " + e.what());
      }
    } else {
      pattern.substring = lowered(value);
    }
    result.patterns_.push_back(std::move(pattern));
  }
  return result;
}

ErrorPagePatterns ErrorPagePatterns::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open error-page patterns: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::size_t ErrorPagePatterns::size() const { return patterns_.size(); }

bool ErrorPagePatterns::matches(std::string_view text) const {
  std::string lower = lowered(text);
  for (const auto& pattern : patterns_) {
    if (pattern.is_regex) {
      // Anchored: the regex must match a full line of the text.
      std::istringstream lines{lower};
      std::string line;
      while (std::getline(lines, line)) {
        if (std::regex_match(line, pattern.regex)) return true;
      }
    } else if (lower.find(pattern.substring) != std::string::npos) {
      return true;
    }
  }
  return false;
}

bool is_error_page(const PageSnapshot& snapshot,
                   const ErrorPagePatterns& patterns) {
  std::string text;
  collect_text(snapshot.root, text);
  return patterns.matches(text);
}

}  // namespace groundkit
