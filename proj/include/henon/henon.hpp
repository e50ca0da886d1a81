#pragma once

#include "henon/error.hpp"
#include "henon/geometry.hpp"
#include "henon/io.hpp"
#include "henon/parallel.hpp"
#include "henon/scalar_map.hpp"
#include "henon/maps.hpp"
#include "henon/fixed_points.hpp"
#include "henon/regions.hpp"
#include "henon/orbits.hpp"
#include "henon/manifolds.hpp"
#include "henon/basin.hpp"
#include "henon/verify.hpp"
