// Independent reference implementations used to validate library results.
// Everything here recomputes values from first principles (finite
// differences, quadrature, exhaustive enumeration, grid search) and shares
// no numerical code with the library beyond basic container types.
#pragma once

#include <functional>

#include "pattn/measures.hpp"
#include "pattn/net.hpp"

namespace pattn::oracle {

/// Central finite differences: g_i = (f(x+h e_i) - f(x-h e_i)) / 2h.
Vec fd_gradient(const std::function<double(ConstSpan)>& f, ConstSpan x, double h = 1e-5);

/// max_i |a_i - b_i| / max(floor, |b_i|).
double max_rel_error(ConstSpan approx, ConstSpan exact, double floor = 1e-6);

/// Network parameters flattened layer by layer (weights row-major, then
/// biases), so whole nets can be probed by fd_gradient.
Vec flatten_params(const DenseNet& net);
void set_params(DenseNet& net, ConstSpan flat);
Vec flatten(const GradientBundle& grads);

/// W1(mu, delta_y) for a 1-D measure by composite trapezoid quadrature of
/// |F_mu - F_{delta_y}| on panels aligned with the CDF breakpoints.
double w1_pointmass_quadrature(const DiscreteMeasure& mu, double y);

/// Exact W1 between two small discrete measures under an arbitrary ground
/// cost: enumerates every vertex of the transportation polytope (basic
/// feasible solutions = spanning trees of the complete bipartite support
/// graph), solves each tree's unique flow by leaf stripping, and returns the
/// cheapest feasible one.  Exponential in atom counts; intended for <= 6x6.
double w1_lp_vertex_enum(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const std::function<double(ConstSpan, ConstSpan)>& cost);

/// Brute-force Frechet mean on the unit 2-sphere: polar grid in the tangent
/// plane of the projected extrinsic mean, coarse sweep over a ball covering
/// all atoms, then exhaustive refinement at `fine` radians around the coarse
/// minimizer.  The objective sum_i w_i * arccos(<x, atom_i>)^2 is evaluated
/// directly; no library geometry is used.
Vec sphere_frechet_grid(const DiscreteMeasure& mu, double fine = 1e-3);

}  // namespace pattn::oracle
