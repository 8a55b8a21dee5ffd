#include "levelforge/localizer.hpp"

namespace levelforge {

Halfspace level_cut(const Evaluation& at_z, const Vector& z, double level) {
    require_same_dim(at_z.subgradient, z, "level_cut");
    return {at_z.subgradient, level - at_z.value + at_z.subgradient.dot(z)};
}

Polyhedron Bundle::polyhedron() const {
    Polyhedron q;
    if (prox_cut) q.add(*prox_cut);
    for (const auto& c : level_cuts) q.add(c);
    return q;
}

Polyhedron Bundle::with_cut(const Halfspace& cut) const {
    Polyhedron q = polyhedron();
    q.add(cut);
    return q;
}

Bundle update_localizer(const Bundle& bundle, const Halfspace& new_cut, const Vector& x_k,
                        const Vector& prox_center, std::size_t memory_depth) {
    require_same_dim(x_k, prox_center, "update_localizer");
    Bundle out;
    out.level_cuts = bundle.level_cuts;
    out.level_cuts.push_back(new_cut);
    while (out.level_cuts.size() > memory_depth) out.level_cuts.pop_front();

    const Vector normal = x_k - prox_center;
    if (normal.squaredNorm() > 0.0) {
        // <x_k - c, x> >= <x_k - c, x_k>  rewritten as  <c - x_k, x> <= <c - x_k, x_k>
        out.prox_cut = Halfspace{-normal, -normal.dot(x_k)};
    }
    return out;
}

}  // namespace levelforge
