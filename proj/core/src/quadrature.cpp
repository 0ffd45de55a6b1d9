#include "nsf/quadrature.hpp"

#include <cmath>

namespace nsf {

const std::array<TriQuadPoint, 3>& triangle_rule() {
    static const std::array<TriQuadPoint, 3> rule = {{
        {{0.5, 0.5, 0.0}, 1.0 / 3.0},
        {{0.0, 0.5, 0.5}, 1.0 / 3.0},
        {{0.5, 0.0, 0.5}, 1.0 / 3.0},
    }};
    return rule;
}

const std::array<EdgeQuadPoint, 2>& edge_rule() {
    static const double a = 0.5 * (1.0 - 1.0 / std::sqrt(3.0));
    static const std::array<EdgeQuadPoint, 2> rule = {{
        {a, 0.5},
        {1.0 - a, 0.5},
    }};
    return rule;
}

}  // namespace nsf
