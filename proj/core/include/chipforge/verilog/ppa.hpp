// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "chipforge/ppa_metrics.hpp"
#include "chipforge/verilog/netlist.hpp"

namespace chipforge::verilog {

/// Unit-cost model for the synthesis proxy. Only relative ordering matters
/// for reward purposes; the defaults make a shared-term full adder beat the
/// sum-of-products variant.
struct CostModel {
    double area_and2 = 1.0;
    double area_or2 = 1.0;
    double area_xor2 = 2.0;
    double area_not = 0.5;

    unsigned levels_and2 = 1;
    unsigned levels_or2 = 1;
    unsigned levels_xor2 = 2;
    unsigned levels_not = 1;

    double ns_per_level = 0.01;
    double area_floor = 0.1;  // pure-wire netlist
    double delay_floor = 0.01;
    double power_per_area = 0.01;

    double area_of(GateKind k) const {
        switch (k) {
        case GateKind::Not: return area_not;
        case GateKind::And2: return area_and2;
        case GateKind::Or2: return area_or2;
        case GateKind::Xor2: return area_xor2;
        }
        return 0.0;
    }
    unsigned levels_of(GateKind k) const {
        switch (k) {
        case GateKind::Not: return levels_not;
        case GateKind::And2: return levels_and2;
        case GateKind::Or2: return levels_or2;
        case GateKind::Xor2: return levels_xor2;
        }
        return 0;
    }
};

/// area = sum of gate areas (floored); delay = level-weighted longest path
/// to any output bit, 0.01 ns per level (floored); power = 0.01 * area.
PpaMetrics estimate_ppa(const GateNetlist& n, const CostModel& cm = CostModel());

} // namespace chipforge::verilog
