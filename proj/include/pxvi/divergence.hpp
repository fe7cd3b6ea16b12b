#pragma once

#include "pxvi/flux.hpp"

namespace pxvi {

/// Weak divergence of the flux of psi: at interior nodes,
///   -(1/node_area) sum over incident cells of a(D psi, x_c) . D hat_j area,
/// consistent with div a(D psi, x) against interior hat functions. Boundary
/// and exterior nodes carry zero (their hats are not admissible tests).
GridFunction flux_divergence(const GridFunction& psi, const Flux& flux);

} // namespace pxvi
