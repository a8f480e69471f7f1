#include <sglasso/edge_set.hpp>
#include <sglasso/error.hpp>

#include <string>

namespace sglasso {

void EdgeSet::insert(std::size_t a, std::size_t b)
{
    if (a == b) throw InvalidArgument("edge set cannot hold a self-loop");
    if (a >= p_ || b >= p_) {
        throw InvalidArgument("edge (" + std::to_string(a) + ", " + std::to_string(b)
                              + ") out of range for p = " + std::to_string(p_));
    }
    edges_.insert(a < b ? Edge{a, b} : Edge{b, a});
}

bool EdgeSet::contains(std::size_t a, std::size_t b) const
{
    return edges_.contains(a < b ? Edge{a, b} : Edge{b, a});
}

std::vector<std::pair<std::size_t, std::size_t>> EdgeSet::pairs() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) out.emplace_back(e.i, e.j);
    return out;
}

} // namespace sglasso
