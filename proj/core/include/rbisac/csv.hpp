// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include <concepts>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace rbisac {

/// Minimal CSV emitter: single header row, LF line endings, fixed numeric
/// formatting (10 significant digits) so reruns are byte-identical.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

    template <typename... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((write_sep(first), write_field(fields)), ...);
        out_ << '\n';
    }

    static std::string format(double v);

private:
    void write_sep(bool& first) {
        if (!first) out_ << ',';
        first = false;
    }
    void write_field(double v) { out_ << format(v); }
    void write_field(std::string_view s) { out_ << s; }
    void write_field(const char* s) { out_ << s; }
    void write_field(const std::string& s) { out_ << s; }
    void write_field(bool b) { out_ << (b ? 1 : 0); }
    template <std::integral T>
    void write_field(T v) {
        out_ << v;
    }

    std::ostream& out_;
};

} // namespace rbisac
