#include "gravelai/validate.hpp"

#include <cmath>
#include <string>

#include "gravelai/error.hpp"

namespace gravelai {

void check_eta(const Instance& instance, std::span<const double> eta) {
    if (eta.size() != instance.arms()) {
        throw Error(ErrorCode::DimensionMismatch, "eta has " + std::to_string(eta.size()) +
                                                      " entries, expected " + std::to_string(instance.arms()));
    }
    for (double v : eta) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error(ErrorCode::InvalidArgument, "rates must be finite and nonnegative");
        }
    }
}

}  // namespace gravelai
