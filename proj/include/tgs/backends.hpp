// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "tgs/selection.hpp"
#include "tgs/world.hpp"

namespace tgs::selection {

struct SelectionResult {
  int chosen = 0;
  std::string raw_response;
  std::string backend;
  double latency = 0.0;  // seconds
};

/// Ground-truth information available to backends that do not look at the
/// image (oracle, fallback).
struct SelectionContext {
  const MarkerSet* markers = nullptr;
  const TraversabilityView* view = nullptr;
  Pose2D pose;
};

class SelectionBackend {
 public:
  virtual ~SelectionBackend() = default;
  virtual std::string id() const = 0;
  /// Whether select() reads bundle.image; lets callers skip rendering.
  virtual bool needs_image() const { return false; }
  virtual SelectionResult select(const PromptBundle& bundle, const SelectionContext& ctx) = 0;
};

/// Lowest-numbered marker whose whole trajectory is geometrically
/// traversable; lowest number overall when none qualifies.
int fallback_choice(const SelectionContext& ctx);

/// Fraction of a marker's waypoints on the given layer.
double traversable_fraction(const Marker& marker, const SelectionContext& ctx, TraversabilityLayer layer);

/// Ground truth: lowest number among fully semantic-traversable markers,
/// otherwise the highest semantic fraction (ties to the lower number). With
/// `endpoint_only` the judgement sees only each marker's final point.
class OracleBackend final : public SelectionBackend {
 public:
  explicit OracleBackend(bool endpoint_only = false) : endpoint_only_(endpoint_only) {}
  std::string id() const override { return endpoint_only_ ? "oracle-endpoint" : "oracle"; }
  SelectionResult select(const PromptBundle& bundle, const SelectionContext& ctx) override;

 private:
  bool endpoint_only_;
};

/// Always the lowest number, i.e. the candidate ending nearest the goal.
class HeuristicBackend final : public SelectionBackend {
 public:
  std::string id() const override { return "heuristic"; }
  SelectionResult select(const PromptBundle& bundle, const SelectionContext& ctx) override;
};

/// Replays recorded responses, one per line of a fixture file. Responses that
/// fail to parse fall back to fallback_choice.
class ReplayBackend final : public SelectionBackend {
 public:
  explicit ReplayBackend(std::vector<std::string> responses) : responses_(std::move(responses)) {}
  static ReplayBackend from_file(const std::filesystem::path& path);

  std::string id() const override { return "replay"; }
  SelectionResult select(const PromptBundle& bundle, const SelectionContext& ctx) override;
  std::size_t remaining() const { return responses_.size() - next_; }

 private:
  std::vector<std::string> responses_;
  std::size_t next_ = 0;
};

struct RemoteConfig {
  /// e.g. "https://api.openai.com/v1/chat/completions"
  std::string endpoint;
  std::string model = "gpt-4o";
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout_seconds = 20.0;
  int retries = 2;
  int max_tokens = 300;
};

/// Chat-completion request with the instruction and the annotated PNG as a
/// base64 data URL.
std::string build_chat_request(const RemoteConfig& cfg, const PromptBundle& bundle);
/// Extracts choices[0].message.content from a chat-completion response.
std::string extract_chat_content(const std::string& body);

/// Vision-language model behind an HTTP chat-completion endpoint. Transport
/// failures on every attempt raise BackendUnavailable; persistent parse
/// failures fall back to fallback_choice.
class RemoteBackend final : public SelectionBackend {
 public:
  /// Throws BackendUnavailable when the endpoint is malformed or the API key
  /// variable is unset.
  explicit RemoteBackend(RemoteConfig cfg);

  std::string id() const override { return "remote"; }
  bool needs_image() const override { return true; }
  SelectionResult select(const PromptBundle& bundle, const SelectionContext& ctx) override;

 private:
  RemoteConfig cfg_;
  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
};

/// Runs `backend` and answers any SelectionError (unavailable service,
/// exhausted fixture, unusable answer) with fallback_choice, so the label is
/// always in bundle.valid_numbers.
SelectionResult select_with_fallback(SelectionBackend& backend, const PromptBundle& bundle,
                                     const SelectionContext& ctx);

}  // namespace tgs::selection
