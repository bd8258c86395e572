#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snowball/graph.hpp"

namespace snowball {

enum class ColumnKind { Binary, Numeric };

/// How empty cells (and nodes without a row) are resolved.
enum class MissingPolicy { Zero, Error };

struct Column {
    std::string name;
    std::vector<double> values;
    /// Set where the value was missing in the input and filled by policy.
    std::vector<bool> missing;
    ColumnKind kind = ColumnKind::Numeric;
};

/// Per-node numeric columns, one entry per NodeId. A column is Binary when
/// every value is 0 or 1.
class AttributeTable {
public:
    AttributeTable() = default;
    explicit AttributeTable(std::size_t node_count) : node_count_(node_count) {}

    std::size_t node_count() const { return node_count_; }
    std::span<const Column> columns() const { return columns_; }

    /// Throws InputError on a length mismatch or a duplicate name.
    void add_column(std::string name, std::vector<double> values, std::vector<bool> missing = {});

    const Column* find(std::string_view name) const;
    /// Throws InputError naming the column when absent.
    const Column& column(std::string_view name) const;

    /// Rows picked out in the given order.
    AttributeTable slice(std::span<const NodeId> rows) const;

private:
    std::size_t node_count_ = 0;
    std::vector<Column> columns_;
};

/// Comma-separated text with a header row; the first column holds node labels
/// that must exist in `net`. Nodes without a row are treated as all-missing,
/// unless `require_every_node` is set, in which case the first such node is an
/// error.
AttributeTable parse_attributes(std::string_view contents, const std::string& source,
                                const Network& net, MissingPolicy policy,
                                bool require_every_node = false);
AttributeTable load_attributes(const std::string& path, const Network& net, MissingPolicy policy);

/// Header "id,<col>..." then one row per node in id order. Missing cells are
/// written empty.
void write_attributes(const AttributeTable& attrs, const Network& net, std::ostream& out);

} // namespace snowball
