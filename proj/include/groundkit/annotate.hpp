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

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "groundkit/snapshot.hpp"

namespace groundkit {

// Instruction-grounding annotation: given a high-level task and the
// before/after snapshots of one action, an annotator derives a
// sub-instruction for that action. Element locations are communicated with
// Set-of-Mark geometry (numbered marks anchored at box corners). The
// completion service is an abstract client; a deterministic stub ships for
// offline runs, and a real VLM transport can be plugged in behind the same
// contract.

struct SomMark {
  int index = 0;  // 1-based, contiguous
  PixelPoint anchor;  // box top-left
  PixelBox box;

  bool operator==(const SomMark&) const = default;
};

struct SomOverlay {
  std::vector<SomMark> marks;

  bool operator==(const SomOverlay&) const = default;
};

// Marks numbered 1..n in document order, anchored at each box's top-left.
SomOverlay build_overlay(const std::vector<Element>& elements);

struct AnnotationRequest {
  std::string high_level_instruction;
  std::string before_ref;
  std::string after_ref;
  SomOverlay overlay;
  int acted_mark = 0;  // must name one of the overlay marks
};

struct AnnotationResponse {
  std::string sub_instruction;  // non-empty after trimming
};

// The request document sent over the client contract: instruction, mark
// table, screenshot references, and the rendered prompt. The prompt template
// uses {instruction}, {acted_mark}, {before}, {after} and {marks}
// placeholders.
nlohmann::ordered_json build_request_doc(const AnnotationRequest& request,
                                         const std::string& prompt_template);

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;

  // Returns the completion text. Throws ClientError; transient failures are
  // retried by annotate().
  virtual std::string complete(const nlohmann::ordered_json& request) = 0;
};

// Stateless deterministic stub: answers every request by rendering a
// response template against the request document. Thread-safe; this is the
// client the offline pipeline runs with.
class TemplateClient : public CompletionClient {
 public:
  explicit TemplateClient(std::string response_template)
      : response_template_(std::move(response_template)) {}

  std::string complete(const nlohmann::ordered_json& request) override;

 private:
  std::string response_template_;
};

// Scripted stub for exercising failure handling: consumes a fixed sequence
// of respond/fail entries. Entries: {"respond": text} or
// {"fail": "transient" | "permanent"}. Response text is template-rendered
// against the request.
class ScriptedClient : public CompletionClient {
 public:
  struct Entry {
    bool fail = false;
    bool transient = true;
    std::string text;
  };

  explicit ScriptedClient(std::vector<Entry> script)
      : script_(std::move(script)) {}

  static std::vector<Entry> parse_script(std::string_view text);

  std::string complete(const nlohmann::ordered_json& request) override;

  std::size_t consumed() const { return next_; }

 private:
  std::vector<Entry> script_;
  std::size_t next_ = 0;
  std::mutex mutex_;
};

struct RetryPolicy {
  int max_retries = 3;
  int base_backoff_ms = 100;  // doubles per retry
  // Injectable for tests; defaults to sleeping.
  std::function<void(int)> sleep_ms;
};

struct AnnotateOutcome {
  AnnotationResponse response;
  int attempts = 1;  // 1 = first try succeeded
};

// Sends the request, retrying transient client failures with exponential
// backoff up to max_retries. Trims the response; empty or over-length
// responses are rejected. The request is never mutated, so identical
// (request, deterministic client) pairs give identical responses.
AnnotateOutcome annotate(const AnnotationRequest& request,
                         CompletionClient& client,
                         const std::string& prompt_template,
                         const RetryPolicy& retry = {},
                         std::size_t max_response_chars = 2000);

}  // namespace groundkit
