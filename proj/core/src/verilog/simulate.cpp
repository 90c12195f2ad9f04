// SPDX-License-Identifier: Apache-2.0
#include "chipforge/verilog/simulate.hpp"

#include <sstream>

#include "chipforge/verilog/elaborate.hpp"

namespace chipforge::verilog {

namespace {

// Index of each netlist port in the table's port list, or an error message.
Expected<std::vector<std::size_t>, std::string> match_ports(const std::vector<NetlistPort>& mod,
                                                            const std::vector<VtPort>& table,
                                                            const char* side) {
    if (mod.size() != table.size())
        return std::string("module has ") + std::to_string(mod.size()) + " " + side +
               " ports but the table declares " + std::to_string(table.size());
    std::vector<std::size_t> idx(mod.size());
    for (std::size_t i = 0; i < mod.size(); ++i) {
        std::size_t found = table.size();
        for (std::size_t j = 0; j < table.size(); ++j) {
            if (table[j].name == mod[i].name) {
                found = j;
                break;
            }
        }
        if (found == table.size())
            return std::string("table does not declare ") + side + " port '" + mod[i].name + "'";
        if (table[found].width != mod[i].width)
            return std::string("port '") + mod[i].name + "' is " + std::to_string(mod[i].width) +
                   " bits in the module but " + std::to_string(table[found].width) +
                   " in the table";
        idx[i] = found;
    }
    return idx;
}

} // namespace

Expected<FunctionalResult, SimError> simulate_vectors(const MiniModule& m, const VectorTable& tb) {
    auto netlist = elaborate(m);
    if (!netlist.ok())
        return SimError{SimError::Kind::Elaboration, netlist.error().str()};
    const GateNetlist& nl = netlist.value();

    auto in_idx = match_ports(nl.inputs, tb.in_ports, "input");
    if (!in_idx.ok()) return SimError{SimError::Kind::PortMismatch, in_idx.error()};
    auto out_idx = match_ports(nl.outputs, tb.out_ports, "output");
    if (!out_idx.ok()) return SimError{SimError::Kind::PortMismatch, out_idx.error()};

    FunctionalResult result;
    result.row_pass.reserve(tb.rows.size());
    std::ostringstream diag;
    bool all = true;

    std::vector<BitVec> in_values(nl.inputs.size());
    for (std::size_t r = 0; r < tb.rows.size(); ++r) {
        const VtRow& row = tb.rows[r];
        for (std::size_t i = 0; i < nl.inputs.size(); ++i)
            in_values[i] = row.in_values[in_idx.value()[i]];
        const std::vector<BitVec> got = simulate_netlist(nl, in_values);
        bool ok = true;
        for (std::size_t o = 0; o < nl.outputs.size(); ++o) {
            const BitVec& expected = row.out_values[out_idx.value()[o]];
            if (!(got[o] == expected)) {
                ok = false;
                diag << "row " << (r + 1) << " (line " << row.line << "): " << nl.outputs[o].name
                     << " expected 0x" << expected.to_hex() << " got 0x" << got[o].to_hex()
                     << '\n';
            }
        }
        result.row_pass.push_back(ok);
        all = all && ok;
    }

    result.pass = all;
    result.diagnostics = diag.str();
    return result;
}

} // namespace chipforge::verilog
