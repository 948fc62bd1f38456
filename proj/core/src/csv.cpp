// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/csv.hpp"

#include <cmath>
#include <cstdio>

namespace rbisac {

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header) : out_(out) {
    bool first = true;
    for (auto h : header) {
        write_sep(first);
        out_ << h;
    }
    out_ << '\n';
}

std::string CsvWriter::format(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0"; // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace rbisac
