#include "snowball/spatial.hpp"

#include <cmath>

#include "snowball/error.hpp"
#include "snowball/text.hpp"

namespace snowball {

void Grid::validate() const {
    if (rows == 0 || cols == 0) throw InputError("grid must have at least one row and one column");
    if (counts.size() != rows * cols) throw InputError("grid has the wrong number of cells");
    for (const double v : counts) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("grid counts must be finite and non-negative");
    }
}

std::string cell_label(std::size_t r, std::size_t c) {
    return "r" + std::to_string(r) + "c" + std::to_string(c);
}

SpatialNetwork grid_to_network(const Grid& grid, const SpatialRule& rule) {
    grid.validate();
    if (!(rule.threshold > 0.0)) throw ConfigError("occupancy threshold must be positive");

    NetworkBuilder builder;
    for (std::size_t r = 0; r < grid.rows; ++r) {
        for (std::size_t c = 0; c < grid.cols; ++c) builder.add_node(cell_label(r, c));
    }

    const auto id = [&](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * grid.cols + c); };
    for (std::size_t r = 0; r < grid.rows; ++r) {
        for (std::size_t c = 0; c < grid.cols; ++c) {
            if (grid.at(r, c) < rule.threshold) continue;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    if (rule.adjacency == Adjacency::Rook && dr != 0 && dc != 0) continue;
                    const auto nr = static_cast<std::ptrdiff_t>(r) + dr;
                    const auto nc = static_cast<std::ptrdiff_t>(c) + dc;
                    if (nr < 0 || nc < 0 || nr >= static_cast<std::ptrdiff_t>(grid.rows) ||
                        nc >= static_cast<std::ptrdiff_t>(grid.cols)) {
                        continue;
                    }
                    builder.add_link(id(r, c), id(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc)));
                }
            }
        }
    }

    SpatialNetwork out{std::move(builder).build(), AttributeTable(grid.rows * grid.cols)};
    out.attrs.add_column("count", grid.counts);
    return out;
}

Grid parse_grid(std::string_view contents, const std::string& source) {
    const auto all = text::lines(contents);
    std::vector<std::string_view> data;
    for (const auto line : all) {
        const auto t = text::trim(line);
        if (!t.empty() && t.front() != '#') data.push_back(t);
    }
    if (data.empty()) throw InputError(source + ": grid file is empty");

    const auto header = text::split_ws(data[0]);
    const auto rows = header.size() == 2 ? text::parse_int(header[0]) : std::nullopt;
    const auto cols = header.size() == 2 ? text::parse_int(header[1]) : std::nullopt;
    if (!rows || !cols || *rows <= 0 || *cols <= 0) throw InputError(source + ": header must be 'rows cols'");

    Grid grid;
    grid.rows = static_cast<std::size_t>(*rows);
    grid.cols = static_cast<std::size_t>(*cols);
    if (data.size() - 1 != grid.rows) {
        throw InputError(source + ": expected " + std::to_string(grid.rows) + " rows, found " +
                         std::to_string(data.size() - 1));
    }
    for (std::size_t r = 0; r < grid.rows; ++r) {
        const auto cells = text::split_ws(data[r + 1]);
        if (cells.size() != grid.cols) {
            throw InputError(source + ": row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) +
                             " values, expected " + std::to_string(grid.cols));
        }
        for (const auto cell : cells) {
            const auto v = text::parse_double(cell);
            if (!v || *v < 0.0) {
                throw InputError(source + ": row " + std::to_string(r + 1) + " has invalid count '" +
                                 std::string(cell) + "'");
            }
            grid.counts.push_back(*v);
        }
    }
    return grid;
}

Grid load_grid(const std::string& path) { return parse_grid(text::read_file(path), path); }

} // namespace snowball
