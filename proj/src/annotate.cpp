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

#include "groundkit/annotate.hpp"

#include <cctype>
#include <chrono>
#include <sstream>
#include <thread>

#include "groundkit/error.hpp"
#include "groundkit/records.hpp"

namespace groundkit {

namespace {

using nlohmann::ordered_json;

std::string trim(std::string_view s) {
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

std::string render_template(const std::string& tmpl, const ordered_json& doc) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    if (tmpl[pos] == '{') {
      std::size_t close = tmpl.find('}', pos);
      if (close == std::string::npos) {
        throw ConfigError("unclosed placeholder in template");
      }
      std::string key = tmpl.substr(pos + 1, close - pos - 1);
      auto it = doc.find(key);
      if (it == doc.end()) {
        throw ConfigError("unknown template placeholder {" + key + "}");
      }
      out += it->is_string() ? it->get<std::string>() : it->dump();
      pos = close + 1;
    } else {
      out.push_back(tmpl[pos++]);
    }
  }
  return out;
}

}  // namespace

SomOverlay build_overlay(const std::vector<Element>& elements) {
  SomOverlay overlay;
  overlay.marks.reserve(elements.size());
  int index = 1;
  for (const auto& element : elements) {
    overlay.marks.push_back(SomMark{
        index++, PixelPoint{element.bbox.x1, element.bbox.y1}, element.bbox});
  }
  return overlay;
}

ordered_json build_request_doc(const AnnotationRequest& request,
                               const std::string& prompt_template) {
  ordered_json marks = ordered_json::array();
  for (const auto& mark : request.overlay.marks) {
    ordered_json entry;
    entry["index"] = mark.index;
    entry["anchor"] = {mark.anchor.x, mark.anchor.y};
    entry["box"] = {mark.box.x1, mark.box.y1, mark.box.x2, mark.box.y2};
    marks.push_back(entry);
  }
  ordered_json doc;
  doc["instruction"] = request.high_level_instruction;
  doc["before"] = request.before_ref;
  doc["after"] = request.after_ref;
  doc["marks"] = marks;
  doc["acted_mark"] = request.acted_mark;
  doc["prompt"] = "";  // placeholder to keep key order stable
  // The prompt may reference every field above.
  ordered_json view = doc;
  view.erase("prompt");
  doc["prompt"] = render_template(prompt_template, view);
  return doc;
}

std::string TemplateClient::complete(const ordered_json& request) {
  return render_template(response_template_, request);
}

std::vector<ScriptedClient::Entry> ScriptedClient::parse_script(
    std::string_view text) {
  std::vector<Entry> script;
  std::istringstream stream{std::string(text)};
  std::string line;
  while (std::getline(stream, line)) {
    if (trim(line).empty()) continue;
    ordered_json doc;
    try {
      doc = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("bad script line: ") + e.what());
    }
    Entry entry;
    if (doc.contains("respond")) {
      entry.text = doc["respond"].get<std::string>();
    } else if (doc.contains("fail")) {
      entry.fail = true;
      entry.transient = doc["fail"].get<std::string>() != "permanent";
    } else {
      throw ConfigError("script entries need \"respond\" or \"fail\"");
    }
    script.push_back(std::move(entry));
  }
  return script;
}

std::string ScriptedClient::complete(const ordered_json& request) {
  Entry entry;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (next_ >= script_.size()) {
      throw ClientError("scripted client exhausted", /*transient=*/false);
    }
    entry = script_[next_++];
  }
  if (entry.fail) {
    throw ClientError(entry.transient ? "scripted transient failure"
                                      : "scripted permanent failure",
                      entry.transient);
  }
  return render_template(entry.text, request);
}

AnnotateOutcome annotate(const AnnotationRequest& request,
                         CompletionClient& client,
                         const std::string& prompt_template,
                         const RetryPolicy& retry,
                         std::size_t max_response_chars) {
  bool mark_known = false;
  for (const auto& mark : request.overlay.marks) {
    if (mark.index == request.acted_mark) {
      mark_known = true;
      break;
    }
  }
  if (!mark_known) {
    throw DataError("acted_mark " + std::to_string(request.acted_mark) +
                    " is not in the overlay");
  }

  const ordered_json doc = build_request_doc(request, prompt_template);
  auto sleep_ms = retry.sleep_ms ? retry.sleep_ms : [](int ms) {
    std::this_thread::sleep_for(std::chrono::milliseconds(ms));
  };

  int attempts = 0;
  int backoff = retry.base_backoff_ms;
  while (true) {
    ++attempts;
    try {
      std::string text = trim(client.complete(doc));
      if (text.empty()) {
        throw ClientError("annotator returned an empty response",
                          /*transient=*/false);
      }
      if (text.size() > max_response_chars) {
        throw ClientError("annotator response exceeds " +
                              std::to_string(max_response_chars) + " chars",
                          /*transient=*/false);
      }
      return AnnotateOutcome{AnnotationResponse{std::move(text)}, attempts};
    } catch (const ClientError& e) {
      if (!e.transient() || attempts > retry.max_retries) throw;
      sleep_ms(backoff);
      backoff *= 2;
    }
  }
}

}  // namespace groundkit
