#pragma once

// Polar-code construction with channel-independent partial orders and
// dimension reduction. Umbrella header.

#include "polarpo/bit_index.hpp"
#include "polarpo/cache.hpp"
#include "polarpo/construction.hpp"
#include "polarpo/dimension_reduction.hpp"
#include "polarpo/errors.hpp"
#include "polarpo/json_io.hpp"
#include "polarpo/partial_order.hpp"
#include "polarpo/relation_matrix.hpp"
#include "polarpo/reliability.hpp"
#include "polarpo/render.hpp"
