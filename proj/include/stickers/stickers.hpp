// Umbrella header.
#pragma once

#include "stickers/bigfloat.hpp"
#include "stickers/combinatorics.hpp"
#include "stickers/dp_oracle.hpp"
#include "stickers/exact_analytics.hpp"
#include "stickers/mc_simulator.hpp"
#include "stickers/numeric.hpp"
#include "stickers/reporting.hpp"
#include "stickers/rng.hpp"
#include "stickers/types.hpp"
