#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tenfold/linalg.hpp"

namespace tenfold {

enum class ClassLabel { A, AIII, AI, BDI, D, DIII, AII, CII, C, CI };

enum class IndexGroup { trivial, Z, Z2, Z2xZ, Z2xZ2 };

std::string to_string(ClassLabel label);
std::string to_string(IndexGroup group);
ClassLabel parse_class_label(const std::string& name);

struct CartanClass {
    ClassLabel label;
    std::string name;
    int t_parity;  // eps_T in {-1, 0, +1}, 0 = absent
    int c_parity;
    bool has_s;
    std::string n_constraint;  // display text, "-" if none
    std::string N_constraint;
    IndexGroup index0;
    IndexGroup index1;

    IndexGroup index_group(int d) const;
    /// Empty string if (n, N) is admissible, otherwise the reason.
    std::string constraint_violation(int n, int N) const;
    bool admits(int n, int N) const { return constraint_violation(n, N).empty(); }
    bool chiral() const { return has_s; }
};

const std::vector<CartanClass>& all_classes();
const CartanClass& cartan_class(ClassLabel label);
const CartanClass& cartan_class(const std::string& name);

/// Unitary parts of the anti-unitary T and C (acting as x -> M conj(x)) and the unitary S.
struct SymmetryOps {
    int N = 0;
    std::optional<CMatrix> T;
    std::optional<CMatrix> C;
    std::optional<CMatrix> S;
};

/// Fill in S = T conj(C) when both anti-unitaries are present.
SymmetryOps make_ops(int N, std::optional<CMatrix> T, std::optional<CMatrix> C,
                     std::optional<CMatrix> S = std::nullopt);

/// Worst residual of the operator relations for the class; throws StructureError above tol.
double check_ops(const SymmetryOps& ops, const CartanClass& cls, const Tolerance& tol = {});

/// Operators in the normal form used throughout the library for the class.
SymmetryOps normal_form_ops(ClassLabel label, int N);

/// Operators for the family U P U^*.
SymmetryOps transform_ops(const SymmetryOps& ops, const CMatrix& U);

/// Operators expressed in the basis B (columns), i.e. transform_ops(ops, B^*).
SymmetryOps transport_ops(const SymmetryOps& ops, const CMatrix& B);

struct ProjectionFamily {
    int d = 0;
    int N = 0;
    int n = 0;
    std::vector<double> k;
    std::vector<CMatrix> P;

    std::size_t size() const { return P.size(); }
    /// Index of -k_j on the grid.
    std::size_t mirror(std::size_t j) const { return P.size() - 1 - j; }
    /// Grid parameter g with 2g+1 samples.
    int g() const { return static_cast<int>(P.size() - 1) / 2; }
    std::size_t index_k0() const { return d == 0 ? 0 : static_cast<std::size_t>(g()); }
    std::size_t index_khalf() const { return d == 0 ? 0 : P.size() - 1; }
};

/// 2g+1 uniformly spaced points over [-1/2, 1/2].
std::vector<double> k_grid(int g);

ProjectionFamily transform_family(const ProjectionFamily& f, const CMatrix& U);

struct ValidationReport {
    bool ok = true;
    std::map<std::string, double> residuals;
    std::vector<std::string> violations;
};

inline constexpr double kContinuityBound = 0.2;

ValidationReport validate_class(const ProjectionFamily& family, const SymmetryOps& ops,
                                const CartanClass& cls, const Tolerance& tol = {},
                                double continuity_bound = kContinuityBound);

/// Unitary B with B^* T conj(B) = I.
CMatrix normal_basis_T_even(const CMatrix& T, const Tolerance& tol = {});
/// Unitary B with B^* T conj(B) = J_{2M}.
CMatrix normal_basis_T_odd(const CMatrix& T, const Tolerance& tol = {});

/// Basis bringing (T, C, S) of a real chiral class to normal_form_ops.
CMatrix class_basis(ClassLabel label, const SymmetryOps& ops, const Tolerance& tol = {});

/// Basis bringing the operators of any class to normal_form_ops.
CMatrix normal_basis(ClassLabel label, const SymmetryOps& ops, const Tolerance& tol = {});

struct ChiralData {
    CMatrix B;
    std::vector<CMatrix> Q;
};

/// Off-diagonal blocks in a basis where S = diag(I_n, -I_n).
ChiralData chiral_reduce(const ProjectionFamily& family, const CMatrix& B, const Tolerance& tol = {});
ChiralData chiral_reduce(const ProjectionFamily& family, const SymmetryOps& ops, ClassLabel label,
                         const Tolerance& tol = {});
/// Basis diagonalizing an involution S as diag(I, -I).
CMatrix chiral_basis(const CMatrix& S, const Tolerance& tol = {});

CMatrix chiral_projection(const CMatrix& Q);
ProjectionFamily chiral_expand(const ChiralData& data, const std::vector<double>& k, int d);

struct ReducedFamily {
    CMatrix B;
    std::vector<CMatrix> A;
};

/// Class D: P = 1/2 (I + i A) in a basis with C = K.
ReducedFamily reduce_D(const ProjectionFamily& family, const SymmetryOps& ops, const Tolerance& tol = {});
ProjectionFamily expand_D(const ReducedFamily& r, const std::vector<double>& k, int d);

/// Class C: P = 1/2 (I + i J A) in a basis with C = J K.
ReducedFamily reduce_C(const ProjectionFamily& family, const SymmetryOps& ops, const Tolerance& tol = {});
ProjectionFamily expand_C(const ReducedFamily& r, const std::vector<double>& k, int d);

/// Residual of the reality condition on Q for a real chiral class (0 for AIII).
double chiral_constraint_residual(ClassLabel label, const std::vector<CMatrix>& Q);

/// The map F_T with F_T(Q(k)) = Q(-k), in the normal form of the class.
CMatrix chiral_reflect(ClassLabel label, const CMatrix& Q);

}  // namespace tenfold
