#pragma once

#include "kzu/module.hpp"
#include "kzu/rootsys.hpp"
#include "kzu/sparse.hpp"

#include <map>
#include <memory>
#include <vector>

namespace kzu {

/// Finite-dimensional irreducible representation with exact operator matrices.
/// Basis vectors are grouped into weight spaces; depth[l] counts how many alpha_l
/// have been subtracted from the highest weight. Vector 0 is |lambda>.
class Irrep {
public:
    const RootSystem& root_system() const { return *rs_; }
    const Weight& highest_weight() const { return lambda_; }
    int dim() const { return dim_; }

    const std::vector<WeightSpace>& spaces() const { return spaces_; }
    const std::vector<int>& space_of() const { return space_of_; }
    const std::vector<int>& depth(int basis_index) const { return spaces_[space_of_[basis_index]].depth; }
    /// Space index at the given depth, or -1.
    int space_index(const std::vector<int>& depth) const;

    const SparseOp& e(int i) const { return e_.at(i); }
    const SparseOp& f(int i) const { return f_.at(i); }
    const SparseOp& h(int i) const { return h_.at(i); }

    /// Root vectors indexed like rs.positive_roots().
    const SparseOp& f_root(int delta) const { return f_root_.at(delta); }
    const SparseOp& e_root(int delta) const { return e_root_.at(delta); }

    /// Replace f_delta by s * f_delta (and e_delta by e_delta / s, keeping the Casimir fixed).
    void rescale_root_vector(int delta, const Rational& s);

    friend Irrep build_irrep(const RootSystem& rs, const Weight& lambda, int max_dim);

private:
    const RootSystem* rs_ = nullptr;
    Weight lambda_;
    int dim_ = 0;
    std::vector<WeightSpace> spaces_;
    std::map<std::vector<int>, int> index_;
    std::vector<int> space_of_;
    std::vector<SparseOp> e_, f_, h_, f_root_, e_root_;
};

/// Builds V_lambda. The root system must outlive the result.
Irrep build_irrep(const RootSystem& rs, const Weight& lambda, int max_dim = 10000);

/// Weyl dimension formula.
Rational weyl_dimension(const RootSystem& rs, const Weight& lambda);

/// (lambda, lambda + 2 rho)
Rational casimir_eigenvalue(const RootSystem& rs, const Weight& lambda);

/// Lie-algebra data fixed once per root system: root-vector normalizations,
/// structure constants and the normalized invariant form, all computed in the adjoint
/// representation. Root vectors are f_delta = [f_{i_n}, [..., [f_{i_2}, f_{i_1}]]] along the
/// witness ordering of delta, and likewise for e_delta.
struct LieStructure {
    /// (h_i, h_j)
    RatMatrix cartan_form;
    RatMatrix cartan_form_inverse;
    /// (e_delta, f_delta) per positive root
    RatVector root_norm;
    /// [f_a, f_b] = c f_{a+b}; only pairs with a+b a positive root are stored
    std::map<std::pair<int, int>, Rational> f_bracket;
    /// [e_a, e_b] = c e_{a+b}
    std::map<std::pair<int, int>, Rational> e_bracket;
};

LieStructure lie_structure(const RootSystem& rs);

/// Normalized invariant form (x, y) = tr_ad(xy) / (2 g*) evaluated on adjoint matrices.
Rational invariant_form(const RootSystem& rs, const SparseOp& ad_x, const SparseOp& ad_y);

/// sum_ij (H^-1)_ij h_i h_j + sum_delta (e f + f e)/(e,f) acting on the irrep.
SparseOp casimir_operator(const Irrep& v, const LieStructure& lie);

}  // namespace kzu
