#pragma once

// Task geometry constants and body builders shared by reset/oracle. Internal.

#include <array>

#include "pickplace/scenesim/task.hpp"
#include "pickplace/tensorgrad/rng.hpp"

namespace scenesim {
namespace detail {

// L-shape made of three 4 cm cells, origin at the bounding-box center,
// 8 cm x 8 cm overall.
Polygon l_polygon(double scale);
Polygon rect_polygon(double w, double h);  // centered
Polygon ngon_polygon(int n, double radius);
// L-marker: legs along +x/+y from the origin corner.
Polygon marker_polygon(double leg, double width);

constexpr double kBlockScale = 1.0;
constexpr double kFixtureScale = 1.125;  // 9 cm over the block's 8 cm
constexpr double kBlockHeight = 0.02;
constexpr double kPlateHeight = 0.002;
constexpr double kBowlRadius = 0.06;
constexpr double kBowlHeight = 0.015;
constexpr double kSmallBlock = 0.03;
constexpr double kMarkerLeg = 0.06;
constexpr double kMarkerWidth = 0.012;
constexpr double kMarkerHeight = 0.001;
constexpr double kEdgeMargin = 0.01;
constexpr int kMaxAttempts = 1000;
constexpr int kDistractors = 10;

constexpr std::array<float, 3> kRed{0.85f, 0.10f, 0.10f};
constexpr std::array<float, 3> kGreen{0.10f, 0.65f, 0.15f};
constexpr std::array<float, 3> kMarkerGreen{0.10f, 0.80f, 0.20f};
constexpr std::array<float, 3> kFixtureColor{0.35f, 0.30f, 0.28f};
constexpr std::array<float, 3> kBoxColor{0.80f, 0.60f, 0.35f};
constexpr std::array<float, 3> kPedestalColor{0.30f, 0.30f, 0.32f};
constexpr std::array<std::array<float, 3>, 10> kPalette{{{0.15f, 0.25f, 0.80f},
                                                         {0.90f, 0.85f, 0.10f},
                                                         {0.10f, 0.75f, 0.80f},
                                                         {0.80f, 0.10f, 0.80f},
                                                         {0.95f, 0.55f, 0.10f},
                                                         {0.50f, 0.15f, 0.70f},
                                                         {0.92f, 0.92f, 0.92f},
                                                         {0.55f, 0.35f, 0.20f},
                                                         {0.95f, 0.60f, 0.70f},
                                                         {0.45f, 0.45f, 0.50f}}};

// Fixed start of the 2-DoF variant's block.
constexpr double k2DofBlockX = -0.15;
constexpr double k2DofBlockY = -0.30;

// Pose of the goal set for the corner-alignment task: two alternatives
// (box axes aligned with the marker, or swapped), each with 2-fold symmetry.
std::vector<GoalAlternative> corner_goals(const Pose3& marker, double w, double h);

// Uniform point inside a polygon (local frame), rejection sampled.
Vec2 sample_in_polygon(const Polygon& p, tensorgrad::Rng& rng);

// Uniform planar pose whose rotated footprint stays inside bounds with the
// edge margin. If fixed_yaw >= -1e8, yaw is not sampled.
Pose3 sample_planar_pose(const Polygon& footprint, const pickplace::Bounds& b,
                         tensorgrad::Rng& rng, double fixed_yaw = -1e9);

}  // namespace detail
}  // namespace scenesim
