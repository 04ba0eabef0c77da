#pragma once

#include <span>

#include "gravelai/reward_models.hpp"

namespace gravelai {

/// Throws unless eta has one finite nonnegative entry per arm.
void check_eta(const Instance& instance, std::span<const double> eta);

}  // namespace gravelai
