#pragma once

#include <array>

namespace nsf {

/// Barycentric quadrature point on the reference triangle.
struct TriQuadPoint {
    std::array<double, 3> bary;
    double weight;  // physical integral = area · Σ weight · f(point)
};

/// Quadrature point on the reference edge [0,1].
struct EdgeQuadPoint {
    double s;
    double weight;
};

/// 3-point midpoint rule, exact for polynomials up to degree 2.
const std::array<TriQuadPoint, 3>& triangle_rule();

/// 2-point Gauss rule, exact up to degree 3.
const std::array<EdgeQuadPoint, 2>& edge_rule();

}  // namespace nsf
