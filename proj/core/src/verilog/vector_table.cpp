// SPDX-License-Identifier: Apache-2.0
#include "chipforge/verilog/vector_table.hpp"

#include <cctype>
#include <sstream>

namespace chipforge::verilog {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

// name[width]
Expected<VtPort, TableParseError> parse_port_token(const std::string& tok, std::size_t line) {
    const auto lb = tok.find('[');
    if (lb == std::string::npos || tok.back() != ']')
        return TableParseError{line, "expected name[width], got '" + tok + "'"};
    VtPort p;
    p.name = tok.substr(0, lb);
    const std::string digits = tok.substr(lb + 1, tok.size() - lb - 2);
    if (p.name.empty() || digits.empty())
        return TableParseError{line, "expected name[width], got '" + tok + "'"};
    std::size_t w = 0;
    for (char c : digits) {
        if (!std::isdigit((unsigned char)c))
            return TableParseError{line, "bad width in '" + tok + "'"};
        w = w * 10 + std::size_t(c - '0');
        if (w > (1u << 20)) return TableParseError{line, "width too large in '" + tok + "'"};
    }
    if (w == 0) return TableParseError{line, "width must be at least 1 in '" + tok + "'"};
    p.width = w;
    return p;
}

Expected<BitVec, TableParseError> parse_value(const std::string& text, std::size_t width,
                                              std::size_t line) {
    BitVec v;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        BitVec acc(text.size() * 4 - 8);
        std::size_t bit = acc.width();
        bool any = false;
        for (std::size_t i = 2; i < text.size(); ++i) {
            const char c = text[i];
            int d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
            else return TableParseError{line, "bad hex digit in '" + text + "'"};
            bit -= 4;
            for (int k = 0; k < 4; ++k) acc.set_bit(bit + std::size_t(k), (d >> k) & 1);
            any = true;
        }
        if (!any) return TableParseError{line, "empty hex value"};
        v = acc;
    } else if (text.size() > 2 && text[0] == '0' && (text[1] == 'b' || text[1] == 'B')) {
        BitVec acc(text.size() - 2);
        std::size_t bit = acc.width();
        for (std::size_t i = 2; i < text.size(); ++i) {
            if (text[i] != '0' && text[i] != '1')
                return TableParseError{line, "bad binary digit in '" + text + "'"};
            acc.set_bit(--bit, text[i] == '1');
        }
        v = acc;
    } else {
        for (char c : text) {
            if (!std::isdigit((unsigned char)c))
                return TableParseError{line, "bad value '" + text + "'"};
        }
        if (text.empty()) return TableParseError{line, "empty value"};
        v = BitVec::from_decimal(text);
    }
    // The value must fit the declared width.
    for (std::size_t i = width; i < v.width(); ++i) {
        if (v.bit(i))
            return TableParseError{line,
                                   "value '" + text + "' does not fit " + std::to_string(width) +
                                       " bits"};
    }
    return v.resized(width);
}

std::string hex_of(const BitVec& v) { return "0x" + v.to_hex(); }

std::string verilog_literal(const BitVec& v) {
    return std::to_string(v.width()) + "'h" + v.to_hex();
}

} // namespace

Expected<VectorTable, TableParseError> parse_vector_table(const std::string& text) {
    VectorTable t;
    std::istringstream is(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;

    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = split_ws(line);
        if (toks.empty()) continue;

        if (!have_header) {
            if (toks[0] != "ports:")
                return TableParseError{line_no, "first line must start with 'ports:'"};
            std::size_t i = 1;
            if (i >= toks.size() || toks[i] != "in")
                return TableParseError{line_no, "expected 'in' after 'ports:'"};
            ++i;
            while (i < toks.size() && toks[i] != "->") {
                auto p = parse_port_token(toks[i], line_no);
                if (!p.ok()) return p.error();
                t.in_ports.push_back(std::move(p.value()));
                ++i;
            }
            if (i >= toks.size() || toks[i] != "->")
                return TableParseError{line_no, "expected '->' in header"};
            ++i;
            if (i >= toks.size() || toks[i] != "out")
                return TableParseError{line_no, "expected 'out' after '->'"};
            ++i;
            while (i < toks.size()) {
                auto p = parse_port_token(toks[i], line_no);
                if (!p.ok()) return p.error();
                t.out_ports.push_back(std::move(p.value()));
                ++i;
            }
            if (t.in_ports.empty() || t.out_ports.empty())
                return TableParseError{line_no, "header needs at least one input and one output"};
            have_header = true;
            continue;
        }

        VtRow row;
        row.line = line_no;
        row.in_values.resize(t.in_ports.size());
        row.out_values.resize(t.out_ports.size());
        std::vector<bool> in_seen(t.in_ports.size(), false);
        std::vector<bool> out_seen(t.out_ports.size(), false);
        bool after_arrow = false;
        for (const auto& tok : toks) {
            if (tok == "->") {
                if (after_arrow) return TableParseError{line_no, "duplicate '->'"};
                after_arrow = true;
                continue;
            }
            const auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0)
                return TableParseError{line_no, "expected name=value, got '" + tok + "'"};
            const std::string name = tok.substr(0, eq);
            const std::string val = tok.substr(eq + 1);
            const auto& ports = after_arrow ? t.out_ports : t.in_ports;
            auto& seen = after_arrow ? out_seen : in_seen;
            auto& values = after_arrow ? row.out_values : row.in_values;
            std::size_t pi = ports.size();
            for (std::size_t k = 0; k < ports.size(); ++k) {
                if (ports[k].name == name) {
                    pi = k;
                    break;
                }
            }
            if (pi == ports.size())
                return TableParseError{line_no, (after_arrow ? std::string("unknown output port '")
                                                             : std::string("unknown input port '")) +
                                                    name + "'"};
            if (seen[pi]) return TableParseError{line_no, "port '" + name + "' assigned twice"};
            auto v = parse_value(val, ports[pi].width, line_no);
            if (!v.ok()) return v.error();
            values[pi] = std::move(v.value());
            seen[pi] = true;
        }
        if (!after_arrow) return TableParseError{line_no, "row is missing '->'"};
        for (std::size_t k = 0; k < in_seen.size(); ++k) {
            if (!in_seen[k])
                return TableParseError{line_no,
                                       "row does not assign input '" + t.in_ports[k].name + "'"};
        }
        for (std::size_t k = 0; k < out_seen.size(); ++k) {
            if (!out_seen[k])
                return TableParseError{line_no,
                                       "row does not expect output '" + t.out_ports[k].name + "'"};
        }
        t.rows.push_back(std::move(row));
    }

    if (!have_header) return TableParseError{line_no, "missing 'ports:' header"};
    return t;
}

std::string render_vector_table(const VectorTable& t) {
    std::ostringstream os;
    os << "ports: in";
    for (const auto& p : t.in_ports) os << ' ' << p.name << '[' << p.width << ']';
    os << " -> out";
    for (const auto& p : t.out_ports) os << ' ' << p.name << '[' << p.width << ']';
    os << '\n';
    for (const auto& row : t.rows) {
        bool first = true;
        for (std::size_t i = 0; i < t.in_ports.size(); ++i) {
            os << (first ? "" : " ") << t.in_ports[i].name << '=' << hex_of(row.in_values[i]);
            first = false;
        }
        os << " ->";
        for (std::size_t i = 0; i < t.out_ports.size(); ++i)
            os << ' ' << t.out_ports[i].name << '=' << hex_of(row.out_values[i]);
        os << '\n';
    }
    return os.str();
}

std::string to_verilog_testbench(const VectorTable& t, const std::string& module_name) {
    std::ostringstream os;
    os << "module tb;\n";
    for (const auto& p : t.in_ports) {
        os << "  reg ";
        if (p.width > 1) os << '[' << (p.width - 1) << ":0] ";
        os << p.name << ";\n";
    }
    for (const auto& p : t.out_ports) {
        os << "  wire ";
        if (p.width > 1) os << '[' << (p.width - 1) << ":0] ";
        os << p.name << ";\n";
    }
    os << "  integer errors;\n";
    os << "  " << module_name << " dut(";
    bool first = true;
    for (const auto& p : t.in_ports) {
        os << (first ? "" : ", ") << '.' << p.name << '(' << p.name << ')';
        first = false;
    }
    for (const auto& p : t.out_ports) os << ", ." << p.name << '(' << p.name << ')';
    os << ");\n";
    os << "  initial begin\n    errors = 0;\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const VtRow& row = t.rows[r];
        os << "    ";
        for (std::size_t i = 0; i < t.in_ports.size(); ++i)
            os << t.in_ports[i].name << " = " << verilog_literal(row.in_values[i]) << "; ";
        os << "#1;\n";
        for (std::size_t i = 0; i < t.out_ports.size(); ++i) {
            const auto& p = t.out_ports[i];
            os << "    if (" << p.name << " !== " << verilog_literal(row.out_values[i])
               << ") begin $display(\"MISMATCH: case " << (r + 1) << " port " << p.name
               << "\"); errors = errors + 1; end\n";
        }
    }
    os << "    if (errors == 0) $display(\"ALL CASES PASS\");\n";
    os << "    else $display(\"FAIL: %0d mismatched checks\", errors);\n";
    os << "    $finish;\n  end\nendmodule\n";
    return os.str();
}

} // namespace chipforge::verilog
