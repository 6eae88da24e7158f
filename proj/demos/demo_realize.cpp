/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// Builds a one-vertex genus-2 surface, realizes it as a flat-curvature
// convex complex and prints the resulting geometry.

#include <cstdio>

#include "prismatic/prismatic.hpp"

using namespace prismatic;

int main() {
    // octagon with identification a b a' b' c d c' d', fan-triangulated:
    // 6 triangles, 9 edges, a single cusp, genus 2
    std::vector<TriangulatedSurface::GluingPair> pairs = {
        {{{0, 1}, {1, 2}}}, {{{1, 1}, {2, 2}}}, {{{2, 1}, {3, 2}}},
        {{{3, 1}, {4, 2}}}, {{{4, 1}, {5, 2}}}, {{{0, 2}, {1, 0}}},
        {{{0, 0}, {2, 0}}}, {{{3, 0}, {5, 0}}}, {{{4, 0}, {5, 1}}},
    };
    TriangulatedSurface surface(6, pairs);
    const auto info = validate(surface);
    std::printf("surface: genus %d, %d cusp(s), %d triangles, %d edges\n", info.genus,
                info.num_cusps, info.num_triangles, info.num_edges);

    DecoratedMetric metric(surface, Vector::Constant(surface.num_edges(), 2.0));
    const auto rep = solve(metric, CurvatureTarget{Vector::Zero(surface.num_cusps())});

    std::printf("solved in %d Newton iterations, residual %.3e\n", rep.iterations, rep.residual);
    std::printf("truncation weight r = %.12f\n", rep.weights[0]);
    const auto pm = lower_metric(rep.state);
    std::printf("lower boundary: edge length %.9f, area %.9f (4 pi = %.9f)\n", pm.lengths[0],
                pm.area, 4.0 * M_PI);
    std::printf("exterior angle of every upper edge: %.9f (pi/9 = %.9f)\n", rep.state.theta[0],
                M_PI / 9.0);
    return 0;
}
