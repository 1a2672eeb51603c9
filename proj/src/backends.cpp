// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgs/backends.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <regex>

#include <nlohmann/json.hpp>

#include "tgs/errors.hpp"

#ifdef TGS_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace tgs::selection {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_context(const SelectionContext& ctx) {
  if (ctx.markers == nullptr || ctx.view == nullptr || ctx.markers->items.empty())
    throw ValidationError("context", "markers and traversability view are required");
}

double fraction_of(const std::vector<bool>& flags) {
  if (flags.empty()) return 0.0;
  std::size_t n = 0;
  for (bool f : flags) n += f;
  return static_cast<double>(n) / static_cast<double>(flags.size());
}

}  // namespace

double traversable_fraction(const Marker& marker, const SelectionContext& ctx, TraversabilityLayer layer) {
  return fraction_of(trace_traversable(*ctx.view, layer, marker.trajectory, ctx.pose));
}

int fallback_choice(const SelectionContext& ctx) {
  require_context(ctx);
  int lowest = ctx.markers->items.front().number;
  int best = -1;
  for (const auto& m : ctx.markers->items) {
    lowest = std::min(lowest, m.number);
    if (traversable_fraction(m, ctx, TraversabilityLayer::kGeometric) == 1.0 && (best < 0 || m.number < best))
      best = m.number;
  }
  return best < 0 ? lowest : best;
}

SelectionResult OracleBackend::select(const PromptBundle& bundle, const SelectionContext& ctx) {
  const auto t0 = Clock::now();
  require_context(ctx);
  int chosen = -1;
  double best_fraction = -1.0;
  for (const auto& m : ctx.markers->items) {
    if (!bundle.valid_numbers.contains(m.number)) continue;
    double f = 0.0;
    if (endpoint_only_) {
      Marker tip = m;
      tip.trajectory.waypoints = {m.trajectory.waypoints.back()};
      f = traversable_fraction(tip, ctx, TraversabilityLayer::kSemantic);
    } else {
      f = traversable_fraction(m, ctx, TraversabilityLayer::kSemantic);
    }
    // Fully traversable markers all tie at 1.0, so the lower number wins
    // exactly as for partial fractions.
    if (f > best_fraction || (f == best_fraction && m.number < chosen)) {
      best_fraction = f;
      chosen = m.number;
    }
  }
  if (chosen < 0) throw InvalidChoice("no marker matches the offered numbers");
  return {chosen, format_answer(chosen), id(), seconds_since(t0)};
}

SelectionResult HeuristicBackend::select(const PromptBundle& bundle, const SelectionContext&) {
  if (bundle.valid_numbers.empty()) throw InvalidChoice("no numbers offered");
  const int chosen = *bundle.valid_numbers.begin();
  return {chosen, format_answer(chosen), id(), 0.0};
}

ReplayBackend ReplayBackend::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open replay fixture " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return ReplayBackend(std::move(lines));
}

SelectionResult ReplayBackend::select(const PromptBundle& bundle, const SelectionContext& ctx) {
  const auto t0 = Clock::now();
  if (next_ >= responses_.size()) throw FixtureExhausted("replay fixture has no responses left");
  std::string raw = responses_[next_++];
  int chosen = 0;
  try {
    chosen = parse_response(raw, bundle.valid_numbers);
  } catch (const SelectionError&) {
    chosen = fallback_choice(ctx);
  }
  return {chosen, std::move(raw), id(), seconds_since(t0)};
}

// ---------------------------------------------------------------------------
// Remote

std::string build_chat_request(const RemoteConfig& cfg, const PromptBundle& bundle) {
  const std::string url = "data:image/png;base64," + base64_encode(encode_png(bundle.image));
  nlohmann::json content = nlohmann::json::array();
  content.push_back({{"type", "text"}, {"text", bundle.instruction}});
  content.push_back({{"type", "image_url"}, {"image_url", {{"url", url}}}});
  nlohmann::json doc = {
      {"model", cfg.model},
      {"max_tokens", cfg.max_tokens},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", content}}})},
  };
  return doc.dump();
}

std::string extract_chat_content(const std::string& body) {
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded()) throw Unparseable("response body is not JSON");
  try {
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    // Content given as a list of typed parts.
    std::string text;
    for (const auto& part : content)
      if (part.value("type", "") == "text") text += part.value("text", "");
    return text;
  } catch (const nlohmann::json::exception&) {
    throw Unparseable("response has no choices[0].message.content");
  }
}

RemoteBackend::RemoteBackend(RemoteConfig cfg) : cfg_(std::move(cfg)) {
  static const std::regex kUrl(R"(^(https?://[^/\s]+)(/\S*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(cfg_.endpoint, m, kUrl))
    throw BackendUnavailable("malformed endpoint URL: '" + cfg_.endpoint + "'");
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
#ifndef TGS_HAVE_OPENSSL
  if (scheme_host_port_.rfind("https", 0) == 0 || scheme_host_port_.rfind("HTTPS", 0) == 0)
    throw BackendUnavailable("built without TLS support; https endpoints are unavailable");
#endif
  const char* key = std::getenv(cfg_.api_key_env.c_str());
  if (key == nullptr || *key == '\0')
    throw BackendUnavailable("environment variable " + cfg_.api_key_env + " is not set");
  api_key_ = key;
}

SelectionResult RemoteBackend::select(const PromptBundle& bundle, const SelectionContext& ctx) {
  const auto t0 = Clock::now();
  const std::string body = build_chat_request(cfg_, bundle);

  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(cfg_.timeout_seconds));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  const httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};

  std::string last_text;
  bool answered = false;
  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    answered = true;
    try {
      last_text = extract_chat_content(res->body);
      const int chosen = parse_response(last_text, bundle.valid_numbers);
      return {chosen, last_text, id(), seconds_since(t0)};
    } catch (const SelectionError&) {
      if (last_text.empty()) last_text = res->body;
    }
  }
  if (!answered) throw BackendUnavailable("remote endpoint failed: " + last_error);
  return {fallback_choice(ctx), last_text, id(), seconds_since(t0)};
}

SelectionResult select_with_fallback(SelectionBackend& backend, const PromptBundle& bundle,
                                     const SelectionContext& ctx) {
  const auto t0 = Clock::now();
  try {
    SelectionResult r = backend.select(bundle, ctx);
    if (bundle.valid_numbers.contains(r.chosen)) return r;
    r.chosen = fallback_choice(ctx);
    return r;
  } catch (const SelectionError& e) {
    return {fallback_choice(ctx), std::string("fallback: ") + e.what(), backend.id(), seconds_since(t0)};
  }
}

}  // namespace tgs::selection
