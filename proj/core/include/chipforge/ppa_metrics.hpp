// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace chipforge {

/// Power/performance/area triple for one design. Valid records have all
/// three fields strictly positive; producers reject anything else.
struct PpaMetrics {
    double delay_ns = 0.0;
    double area_um2 = 0.0;
    double power_w = 0.0;

    bool all_positive() const { return delay_ns > 0.0 && area_um2 > 0.0 && power_w > 0.0; }
};

} // namespace chipforge
