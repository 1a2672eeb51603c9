// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgs/geometry.hpp"
#include "tgs/image.hpp"
#include "tgs/world.hpp"

namespace tgs::selection {

/// Trajectories pooled over the latest `capacity` generation steps. All
/// batches are kept in the frame of the most recent update.
class CandidatePool {
 public:
  struct Batch {
    std::vector<Trajectory> trajectories;
    Pose2D pose;  // pose whose robot frame the trajectories are expressed in
  };

  explicit CandidatePool(std::size_t capacity = 2) : capacity_(capacity) {}

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return batches_.size(); }
  /// Oldest first.
  const std::deque<Batch>& batches() const { return batches_; }

 private:
  friend CandidatePool update_pool(CandidatePool pool, std::vector<Trajectory> batch, const Pose2D& pose);

  std::size_t capacity_;
  std::deque<Batch> batches_;
};

/// Appends `batch` (robot frame at `pose`), re-expresses older batches in that
/// frame and evicts the oldest beyond capacity. Throws EmptyBatch.
CandidatePool update_pool(CandidatePool pool, std::vector<Trajectory> batch, const Pose2D& pose);

/// Greedy Hausdorff filter over the pool, newest batch first: a trajectory is
/// kept iff its distance to every kept one exceeds d_t.
std::vector<Trajectory> dedup_representatives(const CandidatePool& pool, double d_t);
std::vector<Trajectory> dedup_representatives(const std::vector<Trajectory>& ordered, double d_t);

struct Marker {
  int number = 0;
  PixelPolyline polyline;  // empty when the trajectory is fully out of view
  Trajectory trajectory;   // current robot frame
};

struct MarkerSet {
  std::vector<Marker> items;  // ascending by number

  std::set<int> numbers() const;
  const Marker* find(int number) const;
};

/// Orders by distance of the last waypoint to `goal` (robot frame), stable on
/// ties, and numbers 1..N. Polylines are left empty.
MarkerSet sort_and_number(const std::vector<Trajectory>& trajs, const Vec2& goal);

/// Fills each marker's pixel polyline; fully clipped trajectories keep an
/// empty polyline.
void project_markers(MarkerSet& markers, const CameraModel& cam);

enum class MarkingStyle {
  kLinesAndNumbers,  // polyline plus numbered disc at its end
  kNumbersOnly,      // numbered disc at the end point only
};

inline constexpr int kLineWidth = 3;
inline constexpr int kCircleRadius = 12;
inline constexpr Rgb kLineColor{255, 200, 0};
inline constexpr Rgb kCircleColor{255, 0, 0};
inline constexpr Rgb kGlyphColor{255, 255, 255};

/// Draws all polylines, then the numbered discs, each layer in descending
/// number order so lower numbers end up on top. Throws NothingVisible when
/// every polyline is empty.
RgbImage annotate_image(const RgbImage& image, const MarkerSet& markers,
                        MarkingStyle style = MarkingStyle::kLinesAndNumbers);

struct PromptBundle {
  std::string instruction;
  RgbImage image;
  std::set<int> valid_numbers;
};

/// Default instruction reproduced verbatim from the navigation prompt.
extern const char* const kDefaultPrompt;

/// Joins a traversability part and a goal-direction part into one template.
std::string compose_prompt(const std::string& traversability_part, const std::string& direction_part,
                           const std::string& answer_format = "Provide the answer in this form: {'trajectory': []}");

/// Instruction = template with "{N}" replaced by "1-N". Throws EmptyTemplate.
PromptBundle build_prompt(const MarkerSet& markers, const std::string& prompt_template = kDefaultPrompt);

/// Extracts the first `trajectory: [k, ...]` answer anywhere in the text and
/// returns k. Throws Unparseable or InvalidChoice.
int parse_response(const std::string& text, const std::set<int>& valid);

/// Canonical answer text for label k.
std::string format_answer(int k);

}  // namespace tgs::selection
