#pragma once

#include "trailernav/experiments.hpp"
#include "trailernav/footprint.hpp"
#include "trailernav/geometry.hpp"
#include "trailernav/grid.hpp"
#include "trailernav/hitch_controller.hpp"
#include "trailernav/kinematics.hpp"
#include "trailernav/lattice_planner.hpp"
#include "trailernav/map_cover.hpp"
#include "trailernav/motion_primitives.hpp"
#include "trailernav/path_tracker.hpp"
#include "trailernav/simulator.hpp"
#include "trailernav/text_io.hpp"

namespace trailernav {
inline constexpr const char* kVersion = "0.1.0";
}
