#include "snowball/attributes.hpp"

#include <algorithm>
#include <ostream>

#include "snowball/error.hpp"
#include "snowball/text.hpp"

namespace snowball {

void AttributeTable::add_column(std::string name, std::vector<double> values, std::vector<bool> missing) {
    if (values.size() != node_count_) {
        throw InputError("column '" + name + "' has " + std::to_string(values.size()) +
                         " values, expected " + std::to_string(node_count_));
    }
    if (find(name) != nullptr) throw InputError("duplicate column '" + name + "'");
    if (missing.empty()) missing.assign(values.size(), false);
    if (missing.size() != values.size()) throw InputError("missing mask length mismatch for '" + name + "'");

    const bool binary = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0 || v == 1.0; });
    columns_.push_back({std::move(name), std::move(values), std::move(missing),
                        binary ? ColumnKind::Binary : ColumnKind::Numeric});
}

const Column* AttributeTable::find(std::string_view name) const {
    for (const auto& col : columns_) {
        if (col.name == name) return &col;
    }
    return nullptr;
}

const Column& AttributeTable::column(std::string_view name) const {
    const Column* col = find(name);
    if (col == nullptr) throw InputError("unknown attribute '" + std::string(name) + "'");
    return *col;
}

AttributeTable AttributeTable::slice(std::span<const NodeId> rows) const {
    AttributeTable out(rows.size());
    for (const auto& col : columns_) {
        std::vector<double> values;
        std::vector<bool> missing;
        values.reserve(rows.size());
        missing.reserve(rows.size());
        for (const NodeId r : rows) {
            if (r >= node_count_) throw InputError("attribute slice row out of range");
            values.push_back(col.values[r]);
            missing.push_back(col.missing[r]);
        }
        out.add_column(col.name, std::move(values), std::move(missing));
    }
    return out;
}

AttributeTable parse_attributes(std::string_view contents, const std::string& source,
                                const Network& net, MissingPolicy policy, bool require_every_node) {
    const auto all = text::lines(contents);
    std::size_t n = 0;
    while (n < all.size() && text::trim(all[n]).empty()) ++n;
    if (n == all.size()) throw InputError(source + ": attribute file is empty");

    const auto header = text::split(all[n], ',');
    if (header.size() < 2) throw InputError(source + ": header needs a label column and at least one attribute");
    std::vector<std::string> names;
    for (std::size_t c = 1; c < header.size(); ++c) names.emplace_back(text::trim(header[c]));

    const std::size_t ncol = names.size();
    std::vector<std::vector<double>> values(ncol, std::vector<double>(net.node_count(), 0.0));
    std::vector<std::vector<bool>> missing(ncol, std::vector<bool>(net.node_count(), true));
    std::vector<bool> seen(net.node_count(), false);

    for (++n; n < all.size(); ++n) {
        const auto line = text::trim(all[n]);
        if (line.empty() || line.front() == '#') continue;
        const auto where = source + ":" + std::to_string(n + 1);
        const auto cells = text::split(line, ',');
        if (cells.size() != ncol + 1) {
            throw InputError(where + ": expected " + std::to_string(ncol + 1) + " fields, found " +
                             std::to_string(cells.size()));
        }
        const auto label = text::trim(cells[0]);
        const auto id = net.find(label);
        if (!id) throw InputError(where + ": unknown node label '" + std::string(label) + "'");
        if (seen[*id]) throw InputError(where + ": duplicate row for '" + std::string(label) + "'");
        seen[*id] = true;

        for (std::size_t c = 0; c < ncol; ++c) {
            const auto cell = text::trim(cells[c + 1]);
            if (cell.empty()) {
                if (policy == MissingPolicy::Error) {
                    throw InputError(where + ": missing value in row '" + std::string(label) + "', column '" +
                                     names[c] + "'");
                }
                continue;
            }
            const auto v = text::parse_double(cell);
            if (!v) {
                throw InputError(where + ": non-numeric value '" + std::string(cell) + "' in column '" + names[c] + "'");
            }
            values[c][*id] = *v;
            missing[c][*id] = false;
        }
    }

    if (policy == MissingPolicy::Error || require_every_node) {
        for (NodeId i = 0; i < net.node_count(); ++i) {
            if (!seen[i]) throw InputError(source + ": no row for node '" + net.label(i) + "'");
        }
    }

    AttributeTable table(net.node_count());
    for (std::size_t c = 0; c < ncol; ++c) {
        table.add_column(names[c], std::move(values[c]), std::move(missing[c]));
    }
    return table;
}

AttributeTable load_attributes(const std::string& path, const Network& net, MissingPolicy policy) {
    return parse_attributes(text::read_file(path), path, net, policy);
}

void write_attributes(const AttributeTable& attrs, const Network& net, std::ostream& out) {
    out << "id";
    for (const auto& col : attrs.columns()) out << ',' << col.name;
    out << '\n';
    for (NodeId i = 0; i < attrs.node_count(); ++i) {
        out << net.label(i);
        for (const auto& col : attrs.columns()) {
            out << ',';
            if (!col.missing[i]) out << text::format_double(col.values[i]);
        }
        out << '\n';
    }
}

} // namespace snowball
