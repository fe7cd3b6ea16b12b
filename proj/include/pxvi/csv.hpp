#pragma once

#include "pxvi/common.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace pxvi {

/// Shortest round-trip decimal form, 17 significant digits.
inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Row-oriented CSV staging buffer. Column counts are enforced so schema
/// drift fails loudly instead of producing ragged files.
class CsvTable {
public:
    explicit CsvTable(const std::vector<std::string>& header) : cols_(header.size()) {
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) out_ += ',';
            out_ += header[i];
        }
        out_ += '\n';
    }

    CsvTable& add(const std::string& s) {
        raw(s);
        return *this;
    }
    CsvTable& add(const char* s) { return add(std::string(s)); }
    CsvTable& add(double v) {
        raw(csv_num(v));
        return *this;
    }
    CsvTable& add(int v) {
        raw(std::to_string(v));
        return *this;
    }
    CsvTable& add(bool v) {
        raw(v ? "1" : "0");
        return *this;
    }

    void end_row() {
        if (cur_ != cols_)
            throw InvariantError("csv: row has " + std::to_string(cur_) + " cells, header has " +
                                 std::to_string(cols_));
        out_ += '\n';
        cur_ = 0;
    }

    const std::string& str() const {
        if (cur_ != 0) throw InvariantError("csv: unterminated row");
        return out_;
    }

private:
    void raw(const std::string& s) {
        if (cur_ >= cols_) throw InvariantError("csv: too many cells in row");
        if (cur_) out_ += ',';
        out_ += s;
        ++cur_;
    }

    std::string out_;
    size_t cols_{0};
    size_t cur_{0};
};

} // namespace pxvi
