// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgs/selection.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <regex>

#include "tgs/errors.hpp"

namespace tgs::selection {

CandidatePool update_pool(CandidatePool pool, std::vector<Trajectory> batch, const Pose2D& pose) {
  if (batch.empty()) throw EmptyBatch("cannot pool an empty batch");
  for (auto& old : pool.batches_) {
    for (auto& traj : old.trajectories) {
      for (auto& w : traj.waypoints) w = pose.to_local(old.pose.to_world(w));
    }
    old.pose = pose;
  }
  pool.batches_.push_back({std::move(batch), pose});
  // Evict before anyone reads the pool so |entries| <= capacity always holds.
  while (pool.batches_.size() > pool.capacity_) pool.batches_.pop_front();
  return pool;
}

std::vector<Trajectory> dedup_representatives(const std::vector<Trajectory>& ordered, double d_t) {
  if (!(d_t > 0.0)) throw ValidationError("d_t", "must be positive");
  std::vector<Trajectory> kept;
  for (const auto& candidate : ordered) {
    const bool distinct = std::all_of(kept.begin(), kept.end(), [&](const Trajectory& k) {
      return hausdorff_distance(candidate.waypoints, k.waypoints) > d_t;
    });
    if (distinct) kept.push_back(candidate);
  }
  return kept;
}

std::vector<Trajectory> dedup_representatives(const CandidatePool& pool, double d_t) {
  std::vector<Trajectory> ordered;
  for (auto it = pool.batches().rbegin(); it != pool.batches().rend(); ++it)
    ordered.insert(ordered.end(), it->trajectories.begin(), it->trajectories.end());
  return dedup_representatives(ordered, d_t);
}

// ---------------------------------------------------------------------------
// Markers

std::set<int> MarkerSet::numbers() const {
  std::set<int> out;
  for (const auto& m : items) out.insert(m.number);
  return out;
}

const Marker* MarkerSet::find(int number) const {
  for (const auto& m : items)
    if (m.number == number) return &m;
  return nullptr;
}

MarkerSet sort_and_number(const std::vector<Trajectory>& trajs, const Vec2& goal) {
  std::vector<double> dist;
  dist.reserve(trajs.size());
  for (const auto& t : trajs) dist.push_back(distance_to_goal(t, goal));
  std::vector<std::size_t> order(trajs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  MarkerSet set;
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    set.items.push_back({static_cast<int>(rank) + 1, {}, trajs[order[rank]]});
  return set;
}

void project_markers(MarkerSet& markers, const CameraModel& cam) {
  for (auto& m : markers.items) {
    try {
      m.polyline = project_to_image(to_camera_frame(m.trajectory, cam), cam);
    } catch (const EmptyProjection&) {
      m.polyline = {};
      m.polyline.clipped.assign(m.trajectory.waypoints.size(), true);
    }
  }
}

RgbImage annotate_image(const RgbImage& image, const MarkerSet& markers, MarkingStyle style) {
  const bool any = std::any_of(markers.items.begin(), markers.items.end(),
                               [](const Marker& m) { return !m.polyline.empty(); });
  if (!any) throw NothingVisible("every marker is clipped out of the frame");

  std::vector<const Marker*> order;
  for (const auto& m : markers.items) order.push_back(&m);
  std::stable_sort(order.begin(), order.end(),
                   [](const Marker* a, const Marker* b) { return a->number > b->number; });

  RgbImage out = image;
  // Lines go underneath every disc so no label is cut by another path.
  if (style == MarkingStyle::kLinesAndNumbers) {
    for (const Marker* m : order) {
      const auto& pts = m->polyline.points;
      for (std::size_t i = 1; i < pts.size(); ++i)
        draw_thick_line(out, pts[i - 1].x(), pts[i - 1].y(), pts[i].x(), pts[i].y(), kLineWidth, kLineColor);
    }
  }
  for (const Marker* m : order) {
    if (m->polyline.empty()) continue;
    const auto& end = m->polyline.points.back();
    draw_disc(out, end.x(), end.y(), kCircleRadius, kCircleColor);
    draw_number(out, end.x(), end.y(), m->number, kGlyphColor);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prompt

const char* const kDefaultPrompt =
    "Pick one path that I should follow to navigate safely, like what humans do. Remember that I "
    "must walk on pavements, avoid rough, bumpy terrains, and follow the rules. I cannot go "
    "over/under the curbs.\n"
    "The lower number indicates the shortest path to the goal. Pick only one.\n"
    "Provide the answer in this form: {'trajectory': []}";

std::string compose_prompt(const std::string& traversability_part, const std::string& direction_part,
                           const std::string& answer_format) {
  std::string out;
  for (const auto* part : {&traversability_part, &direction_part, &answer_format}) {
    if (part->empty()) continue;
    if (!out.empty()) out += '\n';
    out += *part;
  }
  return out;
}

PromptBundle build_prompt(const MarkerSet& markers, const std::string& prompt_template) {
  if (prompt_template.empty()) throw EmptyTemplate("prompt template is empty");
  if (markers.items.empty()) throw ValidationError("markers", "at least one marker required");
  PromptBundle bundle;
  bundle.valid_numbers = markers.numbers();
  bundle.instruction = prompt_template;
  const std::string range = "1-" + std::to_string(markers.items.size());
  for (std::size_t at = bundle.instruction.find("{N}"); at != std::string::npos;
       at = bundle.instruction.find("{N}", at + range.size()))
    bundle.instruction.replace(at, 3, range);
  return bundle;
}

int parse_response(const std::string& text, const std::set<int>& valid) {
  static const std::regex kAnswer(
      R"(['"]?trajectory['"]?\s*:\s*\[\s*['"]?(-?\d+)['"]?\s*(?:,\s*['"]?-?\d+['"]?\s*)*\])",
      std::regex::icase);
  std::smatch match;
  if (!std::regex_search(text, match, kAnswer))
    throw Unparseable("no {'trajectory': [n]} answer found in response");
  long long value = 0;
  try {
    value = std::stoll(match[1].str());
  } catch (const std::out_of_range&) {
    throw InvalidChoice("trajectory number out of range: " + match[1].str());
  }
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max() ||
      !valid.contains(static_cast<int>(value)))
    throw InvalidChoice("trajectory " + match[1].str() + " is not one of the offered numbers");
  return static_cast<int>(value);
}

std::string format_answer(int k) { return "{'trajectory': [" + std::to_string(k) + "]}"; }

}  // namespace tgs::selection
