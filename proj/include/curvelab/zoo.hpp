#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvelab/function.hpp"

namespace curvelab::zoo {

/// f(x) = 1/2 x^T A x + b^T x for symmetric PSD A (row-major, n*n).
/// L is the largest eigenvalue of A.
ObjectiveFunction quadratic(const std::vector<double>& a_rowmajor, const Vec& b);

/// Diagonal quadratic with closed-form descent and flow solutions.
ObjectiveFunction quadratic_diag(const Vec& diag, const Vec& b);

/// f(x) = x^2 on the line; L = 2.
ObjectiveFunction square();

/// 1-smooth convex piecewise function: t^2/2 for t <= 1, t - 1/2 above.
ObjectiveFunction huber_counterexample();

/// f(x) = |x| + max(0, x); convex, 2-Lipschitz, nonsmooth.
/// The derivative at 0 is taken to be 0 (a valid subgradient).
ObjectiveFunction abs_plus_relu();

/// f(x) = log sum_i exp(<a_i, x> + c_i); L = lambda_max(A^T A).
ObjectiveFunction log_sum_exp(const std::vector<Vec>& rows, const Vec& offsets);

/// Canonical 2-d instance with L = 3.
ObjectiveFunction log_sum_exp();

/// Continuous piecewise-quadratic convex function on the line with a
/// non-decreasing derivative; L is the largest piece curvature.
ObjectiveFunction random_convex_1d(std::uint64_t seed, int pieces);

/// The L-smooth rescaling g(t) = f(sqrt(L) t) of huber_counterexample.
ObjectiveFunction make_counterexample(double smoothness);

/// g(x) = f(sqrt(new_L / old_L) x); requires finite old smoothness.
ObjectiveFunction rescale(const ObjectiveFunction& f, double new_smoothness);

/// Central finite differences against the hand-coded gradient at every
/// point, relative tolerance tol, step h = 1e-5 (1 + |x|). Points within
/// h of a known kink are skipped.
bool gradient_check(const ObjectiveFunction& f, const std::vector<Vec>& points,
                    double tol);

/// Catalogue lookup by id string, e.g. "square", "huber_l=4",
/// "quad_d=1,2,4_b=0,0,1", "lse", "random1d_seed=7_pieces=10", "absrelu".
ObjectiveFunction from_id(const std::string& id);

/// JSON descriptor text: name, L (null when unbounded), dimension, params.
std::string describe(const ObjectiveFunction& f);

/// Largest eigenvalue of a symmetric matrix (cyclic Jacobi sweeps).
double max_eigenvalue_sym(std::vector<double> a_rowmajor, int n);

}  // namespace curvelab::zoo
