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
#pragma once

#include <stdexcept>
#include <string>

namespace prismatic {

/** Base class for all errors thrown by this library. */
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/** Non-finite or otherwise out-of-domain input. */
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/** An exponent too large for double arithmetic. Carries the offending exponent. */
class RangeError : public Error {
public:
    RangeError(const std::string& msg, double exponent)
        : Error(msg + " (exponent " + std::to_string(exponent) + ")"), exponent_(exponent) {}
    double exponent() const noexcept { return exponent_; }

private:
    double exponent_;
};

/** A truncated prism does not exist for the given data.
 *  Reports which corner's horospherical cross-section degenerates; the
 *  triangle id is filled in by callers that know it (-1 otherwise). */
class InadmissiblePrismError : public Error {
public:
    InadmissiblePrismError(const std::string& msg, int corner, int triangle = -1)
        : Error(msg + " at corner " + std::to_string(corner) +
                (triangle >= 0 ? " of triangle " + std::to_string(triangle) : "")),
          corner_(corner),
          triangle_(triangle) {}
    int corner() const noexcept { return corner_; }
    int triangle() const noexcept { return triangle_; }

private:
    int corner_;
    int triangle_;
};

/** Gluing data that does not describe a valid triangulated surface. */
class CombinatoricsError : public Error {
public:
    explicit CombinatoricsError(const std::string& msg) : Error(msg) {}
};

/** Attempt to flip an edge that cannot be flipped. */
class FlipError : public Error {
public:
    explicit FlipError(const std::string& msg) : Error(msg) {}
};

/** Delaunay engine found only unflippable non-convex edges. */
class StuckError : public Error {
public:
    explicit StuckError(const std::string& msg) : Error(msg) {}
};

/** Curvature target outside the admissible set, or a solver precondition failed. */
class InfeasibleTargetError : public Error {
public:
    explicit InfeasibleTargetError(const std::string& msg) : Error(msg) {}
};

/** Iteration cap reached without convergence. */
class NoConvergenceError : public Error {
public:
    explicit NoConvergenceError(const std::string& msg) : Error(msg) {}
};

/** Degenerate input to the Lorentzian routines (e.g. coincident ideal points). */
class DegenerateInputError : public Error {
public:
    explicit DegenerateInputError(const std::string& msg) : Error(msg) {}
};

/** Malformed document. */
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace prismatic
