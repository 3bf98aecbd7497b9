#pragma once

// Minimal CSV scanning over an in-memory buffer. No quoting: none of the
// consumed schemas embed commas. LF and CRLF both accepted.

#include <charconv>
#include <cstdint>
#include <string_view>
#include <vector>

#include "xresp/common.hpp"

namespace xresp {

class CsvScanner {
public:
    explicit CsvScanner(std::string_view text) : text_(text) {}

    /// Advance to the next non-empty line; false at end of input.
    bool next_line() {
        while (pos_ < text_.size()) {
            std::size_t eol = text_.find('\n', pos_);
            std::string_view raw = (eol == std::string_view::npos)
                                       ? text_.substr(pos_)
                                       : text_.substr(pos_, eol - pos_);
            pos_ = (eol == std::string_view::npos) ? text_.size() : eol + 1;
            ++line_no_;
            if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
            if (raw.empty()) continue;
            line_ = raw;
            field_pos_ = 0;
            return true;
        }
        return false;
    }

    std::size_t line_number() const { return line_no_; }
    std::string_view line() const { return line_; }

    std::string_view next_field() {
        if (field_pos_ > line_.size()) throw ParseError("missing field", line_no_);
        std::size_t comma = line_.find(',', field_pos_);
        std::string_view f = (comma == std::string_view::npos)
                                 ? line_.substr(field_pos_)
                                 : line_.substr(field_pos_, comma - field_pos_);
        field_pos_ = (comma == std::string_view::npos) ? line_.size() + 1 : comma + 1;
        return f;
    }

    void expect_end_of_line() {
        if (field_pos_ <= line_.size()) throw ParseError("extra fields", line_no_);
    }

    double parse_double(std::string_view f, const char* what) const {
        double v = 0.0;
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || p != f.data() + f.size())
            throw ParseError(std::string("bad ") + what + " '" + std::string(f) + "'", line_no_);
        return v;
    }

    std::int64_t parse_int(std::string_view f, const char* what) const {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || p != f.data() + f.size())
            throw ParseError(std::string("bad ") + what + " '" + std::string(f) + "'", line_no_);
        return v;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
    std::string_view line_;
    std::size_t field_pos_ = 0;
};

/// Check a header line field-for-field (exact match after trimming CR).
inline void expect_header(CsvScanner& scan, std::initializer_list<std::string_view> fields,
                          const char* file_kind) {
    if (!scan.next_line())
        throw ParseError(std::string("empty ") + file_kind + " file (missing header)", 1);
    for (std::string_view want : fields) {
        std::string_view got = scan.next_field();
        if (got != want)
            throw ParseError(std::string(file_kind) + " header mismatch: expected '" +
                                 std::string(want) + "', got '" + std::string(got) + "'",
                             scan.line_number());
    }
    scan.expect_end_of_line();
}

}  // namespace xresp
