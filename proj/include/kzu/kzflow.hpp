#pragma once

#include "kzu/blocks.hpp"
#include "kzu/svforms.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace kzu {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Config = std::vector<Complex>;

// Killing-orthonormal basis J^a of g as matrices on one irrep. `rotation_seed` != 0 applies a
// random real orthogonal change of basis, which must not change the Casimir.
std::vector<CMatrix> killing_orthonormal_basis(const Irrep& v, const LieStructure& lie, unsigned rotation_seed = 0);

CMatrix to_complex(const RatMatrix& m);
CMatrix to_complex(const SparseOp& m);

// Exact two-point Casimir sum_ij Hinv_ij h_i x h_j + sum_delta (e x f + f x e)/(e, f) on V x W.
RatMatrix two_point_casimir(const Irrep& v, const Irrep& w, const LieStructure& lie);

class KZSystem {
public:
    // Works on the span of `basis` (g-invariant functionals), which must be closed under every Omega_ij.
    KZSystem(const TensorProduct& tp, const LieStructure& lie, const std::vector<InvariantFunctional>& basis, int level);

    int dim() const { return dim_; }
    int points() const { return n_; }
    const Rational& kappa() const { return kappa_; }

    // phi_b o Omega_ij = sum_c K_ij(c, b) phi_c
    const RatMatrix& residue(int i, int j) const { return K_[i * n_ + j]; }

    // dc/dz_i = A_i(z) c
    CMatrix connection(int i, const Config& z) const;
    // sum_i dz_i A_i(z)
    CMatrix along(const Config& z, const Config& dz) const;
    std::vector<CVector> kz_derivative(const Config& z, const CVector& c) const;

    // [K_ij, K_kl] = 0 for disjoint pairs and [K_ij, K_ik + K_jk] = 0, exactly
    bool braid_relations_hold() const;

private:
    int n_, dim_;
    Rational kappa_;
    std::vector<RatMatrix> K_;
    std::vector<CMatrix> Kc_;
};

struct TransportOptions {
    double tol = 1e-10;
    double margin_factor = 0.05;
    double initial_step = 1e-2;
    double min_step = 1e-13;
    long max_steps = 2000000;
};

struct TransportResult {
    CMatrix matrix;
    long steps = 0;
    long rejected = 0;
    double max_error = 0;
    double length = 0;
    double min_separation = 0;
};

// Adaptive Dormand-Prince 5(4) transport of the fundamental matrix along a polyline of configurations.
TransportResult parallel_transport(const KZSystem& sys, const std::vector<Config>& path, const CMatrix& start,
                                   const TransportOptions& opt = {});

CMatrix monodromy_matrix(const KZSystem& sys, const std::vector<Config>& loop, const TransportOptions& opt = {},
                         TransportResult* diagnostics = nullptr);

// Loop in which z_j travels once counterclockwise around z_i (a pure braid generator).
std::vector<Config> braid_loop(const Config& base, int i, int j, int segments = 256);

// Rectangle traced by z_i with corner at its base position, sides w (real) and h (imaginary).
std::vector<Config> rectangle_loop(const Config& base, int i, double w, double h);

std::vector<Config> reverse_path(const std::vector<Config>& path);
std::vector<Config> concat_paths(const std::vector<Config>& a, const std::vector<Config>& b);

struct CurvatureLevel {
    double area = 0;
    double deviation = 0;
};

struct CurvatureReport {
    std::vector<CurvatureLevel> levels;
    double slope = 0;
    bool slope_within = false;
    double max_deviation = 0;
};

// ||M(rectangle) - I|| over dyadically shrinking rectangles and the log-log slope against area.
CurvatureReport rectangle_curvature(const KZSystem& sys, const Config& base, int i, double side, int levels,
                                    const TransportOptions& opt = {});

// Same test for an arbitrary connection dc/ds = B(z, dz) c, used for controls.
using ConnectionFn = std::function<CMatrix(const Config&, const Config&)>;
TransportResult transport_general(const ConnectionFn& conn, int dim, const std::vector<Config>& path,
                                  const CMatrix& start, const TransportOptions& opt);
CurvatureReport rectangle_curvature_general(const ConnectionFn& conn, int dim, const Config& base, int i, double side,
                                            int levels, const TransportOptions& opt);

// Numeric block subspace at complex points: orthonormal columns in invariant coordinates.
CMatrix block_subspace(const TensorProduct& tp, const std::vector<InvariantFunctional>& invariants, const Config& z,
                       int level);

double min_separation(const Config& z);

}  // namespace kzu
