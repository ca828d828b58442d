#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tenfold/symmetry.hpp"

namespace tenfold {

struct ModelFamily {
    ProjectionFamily family;
    SymmetryOps ops;
    ClassLabel label = ClassLabel::A;
};

/// Spectral projection onto eigenvalues below fermi_level; throws GapClosed if the gap is below gap_min.
CMatrix fermi_projection(const CMatrix& H, double fermi_level, double gap_min, double k = 0.0);

ProjectionFamily family_from_hamiltonians(const std::vector<CMatrix>& H, const std::vector<double>& k, int d,
                                          double fermi_level, double gap_min);

/// H(k) = (-2t cos 2πk - μ) σ_z + 2Δ sin 2πk σ_y, class D with C = σ_x.
CMatrix kitaev_hamiltonian(double t, double delta, double mu, double k);
ModelFamily kitaev_chain(double t, double delta, double mu, int g, const Tolerance& tol = {});

/// Off-diagonal block q(k) = t1 + t2 e^{-2πik}, class AIII with S = σ_z.
CMatrix ssh_hamiltonian(double t1, double t2, double k);
ModelFamily ssh(double t1, double t2, int g, const Tolerance& tol = {});

struct RandomOptions {
    int d = 1;
    int g = 64;
    /// Index value to realize (same layout as ClassIndex::value); random when absent.
    std::optional<std::vector<int>> target;
    /// Seed of the basis scramble; pairs sharing it share their operators.
    std::optional<std::uint64_t> ops_seed;
    bool scramble = true;
    int modes = 2;
    double amplitude = 0.25;
};

ModelFamily random_in_class(ClassLabel label, int n, int N, std::uint64_t seed, const RandomOptions& opts = {},
                            const Tolerance& tol = {});

struct ModelSpec {
    std::string name;  // kitaev-chain, ssh, random-class
    std::map<std::string, double> params;
    std::string class_name;  // random-class only
    int g = 128;
    std::uint64_t seed = 0;
};

ModelFamily generate(const ModelSpec& spec, const Tolerance& tol = {});

}  // namespace tenfold
