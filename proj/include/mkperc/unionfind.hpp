#pragma once

#include <cstdint>
#include <vector>

namespace mkperc {

// Union-find over node ids [0, n) with per-component internal link counts and
// live giant-component tracking. The giant is the largest component holding
// at least one link; ties break toward the component containing the lowest
// node id. Links can only be added, never removed.
class UnionFind {
public:
    explicit UnionFind(std::uint32_t n)
        : parent_(n), size_(n, 1), min_node_(n), links_(n, 0) {
        for (std::uint32_t i = 0; i < n; ++i) {
            parent_[i] = i;
            min_node_[i] = i;
        }
    }

    std::uint32_t find(std::uint32_t v) {
        std::uint32_t root = v;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[v] != root) {
            const std::uint32_t next = parent_[v];
            parent_[v] = root;
            v = next;
        }
        return root;
    }

    // Registers one distinct link between a and b, merging their components
    // when they differ.
    void add_link(std::uint32_t a, std::uint32_t b) {
        std::uint32_t ra = find(a);
        std::uint32_t rb = find(b);
        if (ra == rb) {
            links_[ra] += 1;
            return;
        }
        if (size_[ra] < size_[rb]) std::swap(ra, rb);
        parent_[rb] = ra;
        size_[ra] += size_[rb];
        links_[ra] += links_[rb] + 1;
        if (min_node_[rb] < min_node_[ra]) min_node_[ra] = min_node_[rb];
        if (giant_ == rb) giant_ = ra;
        consider_for_giant(ra);
    }

    std::uint32_t size(std::uint32_t root) const { return size_[root]; }
    std::uint64_t links(std::uint32_t root) const { return links_[root]; }
    std::uint32_t min_node(std::uint32_t root) const { return min_node_[root]; }

    bool has_giant() const { return giant_ != kNone; }
    std::uint32_t giant_root() const { return giant_; }
    std::uint32_t giant_size() const { return has_giant() ? size_[giant_] : 0; }
    std::uint64_t giant_links() const { return has_giant() ? links_[giant_] : 0; }

private:
    static constexpr std::uint32_t kNone = UINT32_MAX;

    void consider_for_giant(std::uint32_t root) {
        if (giant_ == kNone || size_[root] > size_[giant_] ||
            (size_[root] == size_[giant_] &&
             min_node_[root] < min_node_[giant_]))
            giant_ = root;
    }

    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::vector<std::uint32_t> min_node_;
    std::vector<std::uint64_t> links_;
    std::uint32_t giant_ = kNone;
};

}  // namespace mkperc
