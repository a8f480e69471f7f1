#pragma once
#include <compare>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

namespace sglasso {

/// Unordered index pair, stored with i < j.
struct Edge
{
    std::size_t i = 0;
    std::size_t j = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on p vertices.
class EdgeSet
{
public:
    EdgeSet() = default;
    explicit EdgeSet(std::size_t p) : p_(p) {}

    std::size_t dim() const noexcept { return p_; }
    std::size_t size() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return edges_.empty(); }
    /// p(p-1)/2.
    std::size_t max_edges() const noexcept { return p_ < 2 ? 0 : p_ * (p_ - 1) / 2; }

    /// Order of the endpoints does not matter. Throws on self-loops or out-of-range indices.
    void insert(std::size_t a, std::size_t b);
    bool contains(std::size_t a, std::size_t b) const;

    auto begin() const noexcept { return edges_.begin(); }
    auto end() const noexcept { return edges_.end(); }

    std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

    friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

private:
    std::size_t p_ = 0;
    std::set<Edge> edges_;
};

} // namespace sglasso
