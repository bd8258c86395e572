#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace snowball {

/// Dense node index, 0 <= id < node_count.
using NodeId = std::uint32_t;

/// Immutable directed graph stored as sorted adjacency arrays. An undirected
/// relationship is stored as both ordered pairs. Every node carries an external
/// string label; ids are contiguous and assigned in first-seen order.
///
/// Safe for concurrent reads once built.
class Network {
public:
    Network() = default;

    std::size_t node_count() const { return labels_.size(); }
    /// Number of ordered pairs.
    std::size_t link_count() const { return targets_.size(); }

    /// Number of distinct out-neighbours of i.
    std::size_t degree(NodeId i) const;
    /// Out-neighbours of i in ascending id order.
    std::span<const NodeId> out_neighbors(NodeId i) const;
    bool has_link(NodeId src, NodeId dst) const;

    const std::string& label(NodeId i) const;
    std::optional<NodeId> find(std::string_view label) const;
    std::span<const std::string> labels() const { return labels_; }

    bool contains(NodeId i) const { return i < node_count(); }

    friend bool operator==(const Network& a, const Network& b) {
        return a.offsets_ == b.offsets_ && a.targets_ == b.targets_ && a.labels_ == b.labels_;
    }

private:
    friend class NetworkBuilder;

    void check(NodeId i) const;

    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> targets_;
    std::vector<std::string> labels_;
    std::map<std::string, NodeId, std::less<>> index_;
};

/// Accumulates nodes and ordered links; duplicates collapse on build().
class NetworkBuilder {
public:
    /// Returns the existing id when the label is already known.
    NodeId add_node(std::string_view label);
    std::optional<NodeId> find(std::string_view label) const;
    std::size_t node_count() const { return labels_.size(); }

    /// Throws InputError on a self-loop or an unknown id.
    void add_link(NodeId src, NodeId dst);
    void add_undirected(NodeId a, NodeId b);

    Network build() &&;

private:
    std::vector<std::string> labels_;
    std::map<std::string, NodeId, std::less<>> index_;
    std::vector<std::pair<NodeId, NodeId>> links_;
};

/// Edge-list text: '#' comments, one link per line as "a b" (undirected) or
/// "a b ->" (one-way a to b, honoured only when `directed` is set).
///
/// `source` names the input in error messages. With `allow_new_labels` false,
/// any label the builder does not already know is rejected.
void parse_edge_list(std::string_view contents, const std::string& source, bool directed,
                     NetworkBuilder& builder, bool allow_new_labels = true);

/// Reads an edge-list file. Malformed lines, self-loops and files without any
/// link are rejected with the path and line number.
Network load_edge_list(const std::string& path, bool directed);
Network edge_list_from_string(std::string_view contents, bool directed);

/// Writes each symmetric pair once as "a b" and each one-way link as "a b ->".
/// Isolated nodes do not appear. Output order depends only on node ids.
void write_edge_list(const Network& net, std::ostream& out);

/// A node-induced subgraph together with the id each node had in its parent.
struct Subgraph {
    Network net;
    std::vector<NodeId> parent_ids;
};

/// Keeps exactly the links of `net` with both endpoints in `nodes`. New ids
/// follow ascending parent id; labels are carried over.
Subgraph induced_subgraph(const Network& net, std::span<const NodeId> nodes);

} // namespace snowball
