#pragma once

#include "levelforge/projection.hpp"

#include <cstddef>
#include <deque>
#include <optional>

namespace levelforge {

/// Level cut h(z, x) <= level stored as <g, x> <= level - f(z) + <g, z>.
[[nodiscard]] Halfspace level_cut(const Evaluation& at_z, const Vector& z, double level);

/// The localizer Q_k kept between iterations: the prox half-space
/// {<x_k - center, x - x_k> >= 0} plus the most recent level cuts.
struct Bundle {
    std::deque<Halfspace> level_cuts;  // oldest first
    std::optional<Halfspace> prox_cut;

    /// Prox cut first, then level cuts oldest to newest.
    [[nodiscard]] Polyhedron polyhedron() const;
    /// Q_{k-1} intersected with the new cut.
    [[nodiscard]] Polyhedron with_cut(const Halfspace& cut) const;
    [[nodiscard]] std::size_t count() const { return level_cuts.size() + (prox_cut ? 1 : 0); }
};

/// Q_k from Q_{k-1}, the cut just added and the projection x_k. Keeps at most
/// memory_depth level cuts, dropping the oldest first. The prox half-space is
/// omitted when x_k coincides with the center.
[[nodiscard]] Bundle update_localizer(const Bundle& bundle, const Halfspace& new_cut, const Vector& x_k,
                                      const Vector& prox_center, std::size_t memory_depth);

}  // namespace levelforge
