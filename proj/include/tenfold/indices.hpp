#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tenfold/symmetry.hpp"

namespace tenfold {

struct PhaseTrack {
    std::vector<double> alpha;
    double max_step = 0.0;
};

inline constexpr double kMaxPhaseStep = kPi / 2.0;

/// Continuous lift of arg det(M) along the samples; each M must be unitary.
PhaseTrack phase_track(const std::vector<CMatrix>& samples, const Tolerance& tol = {});

/// Winding number of det Q around a closed loop; the loop is closed by the first sample if needed.
int winding(const std::vector<CMatrix>& Q, const Tolerance& tol = {});

/// (alpha(1/2) - alpha(0)) / pi for samples on [0, 1/2] with det = ±1 at both ends.
int semi_winding(const std::vector<CMatrix>& Q, const Tolerance& tol = {});

/// DIII sign for A(k) = J^T Q(k) sampled on [0, 1/2].
int diii_sign_index(const std::vector<CMatrix>& A, const Tolerance& tol = {});

struct ClassIndex {
    ClassLabel label = ClassLabel::A;
    int d = 0;
    IndexGroup group = IndexGroup::trivial;
    /// trivial: empty; Z and Z2: one entry; Z2xZ: (det, W); Z2xZ2: (Pf(0), Pf(1/2)).
    std::vector<int> value;
    std::optional<int> weak;
    std::optional<int> strong;
    /// BDI, d = 1: (det Q(0), det Q(1/2)).
    std::optional<std::pair<int, int>> fixed_point_dets;

    bool trivial() const { return group == IndexGroup::trivial; }
    std::string to_string() const;
    bool operator==(const ClassIndex& o) const {
        return label == o.label && d == o.d && group == o.group && value == o.value;
    }
};

/// Index of Table 1 for a validated family.
ClassIndex index(const ProjectionFamily& family, const SymmetryOps& ops, const CartanClass& cls,
                 const Tolerance& tol = {});

}  // namespace tenfold
