#include "snowball/graph.hpp"

#include <algorithm>
#include <ostream>

#include "snowball/error.hpp"
#include "snowball/text.hpp"

namespace snowball {

void Network::check(NodeId i) const {
    if (!contains(i)) {
        throw InputError("node id " + std::to_string(i) + " out of range (node count " +
                         std::to_string(node_count()) + ")");
    }
}

std::size_t Network::degree(NodeId i) const {
    check(i);
    return offsets_[i + 1] - offsets_[i];
}

std::span<const NodeId> Network::out_neighbors(NodeId i) const {
    check(i);
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

bool Network::has_link(NodeId src, NodeId dst) const {
    const auto nbrs = out_neighbors(src);
    return std::binary_search(nbrs.begin(), nbrs.end(), dst);
}

const std::string& Network::label(NodeId i) const {
    check(i);
    return labels_[i];
}

std::optional<NodeId> Network::find(std::string_view label) const {
    const auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeId NetworkBuilder::add_node(std::string_view label) {
    if (const auto it = index_.find(label); it != index_.end()) return it->second;
    const auto id = static_cast<NodeId>(labels_.size());
    labels_.emplace_back(label);
    index_.emplace(std::string(label), id);
    return id;
}

std::optional<NodeId> NetworkBuilder::find(std::string_view label) const {
    const auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void NetworkBuilder::add_link(NodeId src, NodeId dst) {
    if (src >= labels_.size() || dst >= labels_.size()) {
        throw InputError("link endpoint out of range");
    }
    if (src == dst) throw InputError("self-loop on node '" + labels_[src] + "'");
    links_.emplace_back(src, dst);
}

void NetworkBuilder::add_undirected(NodeId a, NodeId b) {
    add_link(a, b);
    add_link(b, a);
}

Network NetworkBuilder::build() && {
    std::sort(links_.begin(), links_.end());
    links_.erase(std::unique(links_.begin(), links_.end()), links_.end());

    Network net;
    net.labels_ = std::move(labels_);
    net.index_ = std::move(index_);
    net.offsets_.assign(net.labels_.size() + 1, 0);
    for (const auto& [src, dst] : links_) ++net.offsets_[src + 1];
    for (std::size_t i = 1; i < net.offsets_.size(); ++i) net.offsets_[i] += net.offsets_[i - 1];
    net.targets_.reserve(links_.size());
    for (const auto& link : links_) net.targets_.push_back(link.second);
    return net;
}

void parse_edge_list(std::string_view contents, const std::string& source, bool directed,
                     NetworkBuilder& builder, bool allow_new_labels) {
    const auto all = text::lines(contents);
    for (std::size_t n = 0; n < all.size(); ++n) {
        const auto line = text::trim(all[n]);
        if (line.empty() || line.front() == '#') continue;
        const auto where = source + ":" + std::to_string(n + 1);

        const auto fields = text::split_ws(line);
        const bool arrow = fields.size() == 3 && fields[2] == "->";
        if (fields.size() != 2 && !arrow) {
            throw InputError(where + ": malformed line, expected 'a b' or 'a b ->'");
        }
        if (fields[0] == fields[1]) {
            throw InputError(where + ": self-loop on '" + std::string(fields[0]) + "'");
        }

        auto resolve = [&](std::string_view label) {
            if (allow_new_labels) return builder.add_node(label);
            const auto id = builder.find(label);
            if (!id) throw InputError(where + ": unknown unit '" + std::string(label) + "'");
            return *id;
        };
        const NodeId a = resolve(fields[0]);
        const NodeId b = resolve(fields[1]);
        if (arrow && directed) {
            builder.add_link(a, b);
        } else {
            builder.add_undirected(a, b);
        }
    }
}

namespace {

Network parse_whole(std::string_view contents, const std::string& source, bool directed) {
    NetworkBuilder builder;
    parse_edge_list(contents, source, directed, builder);
    if (builder.node_count() == 0) throw InputError(source + ": edge list contains no links");
    return std::move(builder).build();
}

} // namespace

Network load_edge_list(const std::string& path, bool directed) {
    return parse_whole(text::read_file(path), path, directed);
}

Network edge_list_from_string(std::string_view contents, bool directed) {
    return parse_whole(contents, "<string>", directed);
}

void write_edge_list(const Network& net, std::ostream& out) {
    for (NodeId i = 0; i < net.node_count(); ++i) {
        for (const NodeId j : net.out_neighbors(i)) {
            if (net.has_link(j, i)) {
                if (i < j) out << net.label(i) << ' ' << net.label(j) << '\n';
            } else {
                out << net.label(i) << ' ' << net.label(j) << " ->\n";
            }
        }
    }
}

Subgraph induced_subgraph(const Network& net, std::span<const NodeId> nodes) {
    std::vector<NodeId> sorted(nodes.begin(), nodes.end());
    for (const NodeId i : sorted) {
        if (!net.contains(i)) {
            throw InputError("induced_subgraph: node id " + std::to_string(i) + " outside network");
        }
    }
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    constexpr NodeId kAbsent = static_cast<NodeId>(-1);
    std::vector<NodeId> local(net.node_count(), kAbsent);
    NetworkBuilder builder;
    for (const NodeId i : sorted) local[i] = builder.add_node(net.label(i));
    for (const NodeId i : sorted) {
        for (const NodeId j : net.out_neighbors(i)) {
            if (local[j] != kAbsent) builder.add_link(local[i], local[j]);
        }
    }
    return {std::move(builder).build(), std::move(sorted)};
}

} // namespace snowball
