#pragma once

namespace sigshift::bump {

// Phi(u) = exp(-1/(1-u^2)) on |u| < 1, zero elsewhere.
double kernel(double u);

// n-th derivative of Phi, computed from the derivatives of g(u) = -1/(1-u^2)
// through y^(n+1) = sum_k C(n,k) g^(k+1) y^(n-k).
double kernel_derivative(double u, int n);

// sup |D^m g(u) - D^m g(u')| / |u-u'|^(beta-m), m = floor(beta), for the unit bump
// placed next to a second copy (support [-1,3]), evaluated on a fine grid.
// Cached per beta.
double kernel_holder_constant(double beta);

}  // namespace sigshift::bump
