#include "frs/diagnostic.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace frs {

void sort_diagnostics(std::vector<Diagnostic>& diags) {
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        if (a.span.start_line != b.span.start_line) return a.span.start_line < b.span.start_line;
        if (a.span.start_col != b.span.start_col) return a.span.start_col < b.span.start_col;
        return a.code < b.code;
    });
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

namespace {

std::string source_line(const std::string& source, uint32_t line) {
    uint32_t cur = 1;
    size_t begin = 0;
    while (cur < line) {
        size_t nl = source.find('\n', begin);
        if (nl == std::string::npos) return {};
        begin = nl + 1;
        ++cur;
    }
    size_t end = source.find('\n', begin);
    if (end == std::string::npos) end = source.size();
    return source.substr(begin, end - begin);
}

} // namespace

std::string render_diagnostics_text(const std::vector<Diagnostic>& diags,
                                    const std::string& source,
                                    const std::string& filename) {
    std::ostringstream os;
    for (const auto& d : diags) {
        os << filename << ':' << d.span.start_line << ':' << d.span.start_col << ": "
           << (d.severity == Severity::Error ? "error" : "warning") << '[' << d.code
           << "]: " << d.message << '\n';
        std::string line = source_line(source, d.span.start_line);
        if (!line.empty()) {
            os << "    " << line << '\n';
            os << "    ";
            for (uint32_t i = 1; i < d.span.start_col; ++i)
                os << (i - 1 < line.size() && line[i - 1] == '\t' ? '\t' : ' ');
            uint32_t width = 1;
            if (d.span.end_line == d.span.start_line && d.span.end_col > d.span.start_col)
                width = d.span.end_col - d.span.start_col;
            for (uint32_t i = 0; i < width; ++i) os << '^';
            os << '\n';
        }
        if (d.has_note) {
            os << "    note: " << d.note;
            if (d.note_span.start_line)
                os << " (line " << d.note_span.start_line << ')';
            os << '\n';
        }
    }
    return os.str();
}

std::string render_diagnostics_json(const std::vector<Diagnostic>& diags) {
    std::string out;
    for (const auto& d : diags) {
        nlohmann::json j = {
            {"code", d.code},
            {"severity", d.severity == Severity::Error ? "error" : "warning"},
            {"line", d.span.start_line},
            {"col", d.span.start_col},
            {"end_line", d.span.end_line},
            {"end_col", d.span.end_col},
            {"message", d.message},
        };
        out += j.dump();
        out += '\n';
    }
    return out;
}

} // namespace frs
