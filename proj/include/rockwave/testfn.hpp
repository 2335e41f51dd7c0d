#pragma once

#include "rockwave/fit.hpp"
#include "rockwave/graded.hpp"

#include <vector>

namespace rockwave {

/// Two interchangeable mollifier families for the cutoff profile; scaling
/// slopes must not depend on which one is used.
enum class BumpKind { exp_inv, exp_inv_sq };

/// C-infinity cutoff: 1 on [0,1], 0 on [2,inf), smooth strictly monotone
/// transition in between, with closed-form first and second derivatives.
struct Bump {
    BumpKind kind = BumpKind::exp_inv;

    double phi(double r) const;
    double dphi(double r) const;
    double d2phi(double r) const;
};

struct TestfnSpec {
    GradedStructure gs = GradedStructure::isotropic(1, 1);
    double p = 2.0;
    std::vector<double> radii = {4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
    BumpKind bump = BumpKind::exp_inv;
    int grid_points = 256;      ///< per axis; the box scales with the radius
    double box_factor = 4.5;    ///< box length = box_factor * R
    double phi_floor = 1e-6;    ///< annulus cut where the cutoff nears zero
};

struct TestfnResult {
    std::vector<double> radii;
    std::vector<double> time_integral;    ///< first time-derivative functional
    std::vector<double> op_integral;      ///< operator functional
    std::vector<double> time2_integral;   ///< second time-derivative functional
    FitResult time_fit, op_fit, time2_fit;
    double theory_first;    ///< Q + nu - nu p/(p-1), shared by the first two
    double theory_second;   ///< Q + nu - 2 nu p/(p-1)
};

/// Evaluate the three rescaled cutoff functionals
///   I1(R) = integral |d_t f_R|^{p'} f_R^{-1/(p-1)},
///   I2(R) = integral |(op) f_R|^{p'} f_R^{-1/(p-1)},
///   I3(R) = integral |d_t^2 f_R|^{p'} f_R^{-1/(p-1)},
/// for f_R(t,x) = phi(|x|/R) phi(t/R^nu), and fit their log-log slopes in R.
/// The spatial operator is applied spectrally on a grid proportional to R.
TestfnResult testfn_scaling(const TestfnSpec& spec);

} // namespace rockwave
