#pragma once

#include <string>
#include <tuple>

namespace convlint {

/// Position of a syntactic element. Lines and columns are 1-based; a tab
/// counts as one column.
struct SourceLocation {
    std::string file;
    int line = 1;
    int column = 1;

    friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

inline bool location_before(const SourceLocation& a, const SourceLocation& b) {
    return std::tie(a.line, a.column) < std::tie(b.line, b.column);
}

} // namespace convlint
