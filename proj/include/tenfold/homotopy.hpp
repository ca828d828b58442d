#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tenfold/indices.hpp"
#include "tenfold/symmetry.hpp"

namespace tenfold {

struct FillReport {
    bool converged = false;
    int iterations = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    int refinements = 0;
    std::string method;
};

/// Boundary data of a rectangle sampled on a K x S grid. Corners are shared:
/// bottom[0] = left[0], bottom[K-1] = right[0], top[0] = left[S-1], top[K-1] = right[S-1].
struct SquareBoundary {
    std::vector<CMatrix> bottom;  // s = 0, k increasing
    std::vector<CMatrix> top;     // s = 1, k increasing
    std::vector<CMatrix> left;    // k = k_min, s increasing
    std::vector<CMatrix> right;   // k = k_max, s increasing
    double hk = 1.0;
    double hs = 1.0;

    int K() const { return static_cast<int>(bottom.size()); }
    int S() const { return static_cast<int>(left.size()); }
};

struct GridFill {
    int K = 0;
    int S = 0;
    std::vector<CMatrix> nodes;  // index is * K + ik
    FillReport report;

    const CMatrix& at(int ik, int is) const { return nodes[static_cast<std::size_t>(is * K + ik)]; }
};

struct FillOptions {
    Tolerance tol;
    double continuity_bound = kContinuityBound;
};

/// Interior of rank-`rank` projections extending the boundary.
GridFill fill_projection_square(const SquareBoundary& b, int rank, const FillOptions& opts = {});

/// Winding of det Q around the boundary, oriented so that it equals W(top) - W(bottom) when
/// the left and right sides coincide.
int boundary_winding(const SquareBoundary& b, const Tolerance& tol = {});

/// Interior of unitaries extending the boundary; throws WindingObstruction if the boundary winds.
GridFill fill_unitary_square(const SquareBoundary& b, const FillOptions& opts = {});

struct HomotopyOptions {
    Tolerance tol;
    int s_points = 65;
    double continuity_bound = kContinuityBound;
    int max_refinements = 3;
    std::uint64_t seed = 0;
};

struct Homotopy {
    ClassLabel label = ClassLabel::A;
    int d = 0;
    int N = 0;
    int n = 0;
    std::vector<double> s;
    std::vector<double> k;  // {0} for d = 0
    std::vector<std::vector<CMatrix>> P;  // P[is][jk]
    int cure_winding = 0;
    FillReport fill;

    ProjectionFamily slice(std::size_t is) const;
};

/// Uniform grid of `points` samples of [0, 1].
std::vector<double> s_grid(int points);

Homotopy connect0(const CMatrix& P0, const CMatrix& P1, const SymmetryOps& ops, const CartanClass& cls,
                  const HomotopyOptions& opts = {});
Homotopy connect1_A(const ProjectionFamily& P0, const ProjectionFamily& P1, const HomotopyOptions& opts = {});
Homotopy connect1_nonchiral(const ProjectionFamily& P0, const ProjectionFamily& P1, const SymmetryOps& ops,
                            const CartanClass& cls, const HomotopyOptions& opts = {});
Homotopy connect1_chiral(const ProjectionFamily& P0, const ProjectionFamily& P1, const SymmetryOps& ops,
                         const CartanClass& cls, const HomotopyOptions& opts = {});
/// Boundary of [k0, 1/2] x [0, 1] in the off-diagonal blocks, with fixed-point paths on the sides and no cure.
/// k0 = 0, except k0 = -1/2 for AIII.
SquareBoundary chiral_boundary(const ProjectionFamily& P0, const ProjectionFamily& P1, const SymmetryOps& ops,
                               const CartanClass& cls, const HomotopyOptions& opts = {});
/// Dispatch on d and the class.
Homotopy connect(const ProjectionFamily& P0, const ProjectionFamily& P1, const SymmetryOps& ops,
                 const CartanClass& cls, const HomotopyOptions& opts = {});

struct HomotopyReport {
    bool ok = true;
    std::vector<std::string> violations;
    double max_step_k = 0.0;
    double max_step_s = 0.0;
    double endpoint_error = 0.0;
    int failed_slices = 0;
};

/// Independent check of a homotopy; endpoints are compared when the families are given.
HomotopyReport verify_homotopy(const Homotopy& h, const SymmetryOps& ops, const CartanClass& cls,
                               const ProjectionFamily* P0 = nullptr, const ProjectionFamily* P1 = nullptr,
                               const HomotopyOptions& opts = {});

}  // namespace tenfold
