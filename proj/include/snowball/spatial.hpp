#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "snowball/attributes.hpp"
#include "snowball/graph.hpp"

namespace snowball {

/// Rectangular grid of plot counts, row-major.
struct Grid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> counts;

    double at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }
    /// Throws InputError unless rows*cols non-negative counts are present.
    void validate() const;
};

enum class Adjacency {
    /// Shared edges only (N, S, E, W).
    Rook,
    /// Shared edges and corners.
    Queen,
};

struct SpatialRule {
    Adjacency adjacency = Adjacency::Rook;
    /// A plot is occupied when its count is at least this value.
    double threshold = 1.0;
};

/// Label used for the node of cell (r, c): "r<r>c<c>".
std::string cell_label(std::size_t r, std::size_t c);

struct SpatialNetwork {
    Network net;
    /// One column, "count", holding each plot's count.
    AttributeTable attrs;
};

/// One node per plot. An occupied plot links to each of its neighbours, so a
/// link between two occupied plots runs both ways, a link from an occupied
/// plot to an empty one runs one way, and empty plots have no out-links.
SpatialNetwork grid_to_network(const Grid& grid, const SpatialRule& rule);

/// Header line "rows cols", then one line of whitespace-separated counts per
/// row. A row with the wrong number of values is reported by its 1-based row
/// index.
Grid parse_grid(std::string_view contents, const std::string& source);
Grid load_grid(const std::string& path);

} // namespace snowball
