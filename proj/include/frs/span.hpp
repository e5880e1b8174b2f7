#pragma once

#include <cstdint>

namespace frs {

/// Byte range plus 1-based line/column endpoints of a source slice.
/// `begin`/`end` are byte offsets (half-open); the column of `end_col`
/// is one past the last byte of the slice on `end_line`.
struct SourceSpan {
    uint32_t file_id = 0;
    uint32_t begin = 0;
    uint32_t end = 0;
    uint32_t start_line = 1;
    uint32_t start_col = 1;
    uint32_t end_line = 1;
    uint32_t end_col = 1;

    static SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
        SourceSpan s;
        s.file_id = a.file_id;
        const SourceSpan& lo = (a.begin <= b.begin) ? a : b;
        const SourceSpan& hi = (a.end >= b.end) ? a : b;
        s.begin = lo.begin;
        s.start_line = lo.start_line;
        s.start_col = lo.start_col;
        s.end = hi.end;
        s.end_line = hi.end_line;
        s.end_col = hi.end_col;
        return s;
    }
};

} // namespace frs
