#ifndef NEUMANN_QUADRATURE_HPP
#define NEUMANN_QUADRATURE_HPP

#include <functional>

namespace neumann::quadrature {

// Adaptive Gauss-Kronrod (G7/K15) on [a, b]. Bisects until the local K15-G7
// error estimate meets tol_rel * |integral| + tol_abs.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double tol_rel = 1e-12, double tol_abs = 0.0, int max_depth = 60);

// Tanh-sinh (double exponential) rule on [a, b]. Robust to integrable endpoint
// singularities; used as the independent second route for frozen constants.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

}  // namespace neumann::quadrature

#endif
