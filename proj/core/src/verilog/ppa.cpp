// SPDX-License-Identifier: Apache-2.0
#include "chipforge/verilog/ppa.hpp"

#include <algorithm>

namespace chipforge::verilog {

PpaMetrics estimate_ppa(const GateNetlist& n, const CostModel& cm) {
    double area = 0.0;
    std::vector<unsigned> level(n.value_count(), 0);
    const std::size_t gate_base = 2 + n.input_bit_count();

    for (std::size_t g = 0; g < n.gates.size(); ++g) {
        const Gate& gate = n.gates[g];
        area += cm.area_of(gate.kind);
        unsigned in_level = level[gate.a];
        if (gate.kind != GateKind::Not) in_level = std::max(in_level, level[gate.b]);
        level[gate_base + g] = in_level + cm.levels_of(gate.kind);
    }

    unsigned depth = 0;
    for (BitRef r : n.output_bits) depth = std::max(depth, level[r]);

    PpaMetrics m;
    m.area_um2 = std::max(area, cm.area_floor);
    m.delay_ns = std::max(double(depth) * cm.ns_per_level, cm.delay_floor);
    m.power_w = cm.power_per_area * m.area_um2;
    return m;
}

} // namespace chipforge::verilog
