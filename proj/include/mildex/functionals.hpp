// The martingale-type noise functionals xi, eta, phi: geometric-weight linear
// combinations of V_1..V_n that every limit statement is expressed in, plus
// their limiting covariance matrices.
#pragma once

#include <array>

#include "mildex/model.hpp"
#include "mildex/summation.hpp"

namespace mildex {

struct FunctionalSet {
    double xi_theta = 0.0;  // k^{-1/2} sum theta^{-l} V_l
    double eta_theta = 0.0; // k^{-1/2} sum theta^{-(n-l)-1} V_l
    double xi_rho = 0.0;
    double eta_rho = 0.0;
    double phi_theta = 0.0; // (n sqrt k)^{-1} sum (n-l+1) theta^{-l} V_l
};

// All five values in O(n); inverse powers may flush to zero for large l,
// which is harmless since the weights decay geometrically.
FunctionalSet compute_functionals(const SamplePath& path,
                                  SummationMode mode = SummationMode::Plain);

// n(xi_theta - phi_theta)/k_n + xi_theta/(2 gamma1): the scalar whose limit is
// zeta_theta in the equal-roots branch. Throws unless gamma1 == gamma2.
double zeta_combination(const FunctionalSet& fs, const ModelConfig& config);

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Matrix3 = std::array<std::array<double, 3>, 3>;
using Matrix4 = std::array<std::array<double, 4>, 4>;

// Limit covariance of (xi_theta, eta_theta, xi_rho, eta_rho), same-sign roots.
Matrix4 sigma1_matrix(double gamma1, double gamma2, double sigma);
// Same vector, opposite-sign roots: fully diagonal (mutual independence).
Matrix4 sigma2_matrix(double gamma1, double gamma2, double sigma);
// Limit covariance of (phi_theta, xi_theta, eta_theta).
Matrix3 gamma_matrix(double gamma1, double sigma);
// Limit covariance of (phi_theta, zeta_theta) in the equal-roots branch.
Matrix2 xi_matrix(double gamma, double sigma);

} // namespace mildex
