// A realized state path with its control path and seed provenance.
#pragma once

#include <cstdint>
#include <vector>

namespace covertctl {

struct Trajectory {
    std::vector<double> states;      ///< X_1 .. X_n
    std::vector<double> controls;    ///< U_1 .. U_n (all zero when uncontrolled)
    double initial_state = 0.0;      ///< X_0
    std::uint64_t seed = 0;
    std::vector<int> crossing_times; ///< threshold/reset controllers only

    bool operator==(const Trajectory &) const = default;
};

} // namespace covertctl
