#pragma once
/// @file heis.hpp
/// @brief Umbrella header.

#include <heis/calibration.hpp>
#include <heis/core.hpp>
#include <heis/dual.hpp>
#include <heis/expr.hpp>
#include <heis/graph.hpp>
#include <heis/grid.hpp>
#include <heis/json_io.hpp>
#include <heis/mesh_io.hpp>
#include <heis/variation.hpp>
#include <heis/zoo.hpp>
