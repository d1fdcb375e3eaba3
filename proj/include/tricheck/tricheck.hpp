#pragma once

// Umbrella header.

#include "tricheck/core.hpp"
#include "tricheck/delaunay.hpp"
#include "tricheck/edge_map.hpp"
#include "tricheck/interval_tree.hpp"
#include "tricheck/io.hpp"
#include "tricheck/predicates.hpp"
#include "tricheck/pstv.hpp"
#include "tricheck/testkit.hpp"
