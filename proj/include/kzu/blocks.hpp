#pragma once

#include "kzu/irrep.hpp"

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

namespace kzu {

using TensorIndex = std::int64_t;
/// Sparse vector in a tensor product, keyed by mixed-radix index.
using TensorState = std::map<TensorIndex, Rational>;

/// V_{lambda_1} x ... x V_{lambda_N} with mixed-radix indexing, factor 0 most significant.
class TensorProduct {
public:
    explicit TensorProduct(std::vector<const Irrep*> factors);

    int size() const { return static_cast<int>(factors_.size()); }
    const Irrep& factor(int i) const { return *factors_[i]; }
    TensorIndex total_dim() const { return total_; }

    TensorIndex encode(const std::vector<int>& digits) const;
    std::vector<int> decode(TensorIndex idx) const;
    int digit(TensorIndex idx, int factor) const;
    TensorIndex with_digit(TensorIndex idx, int factor, int value) const;

    /// Total depth (root coordinates subtracted from sum of highest weights) of a tensor.
    std::vector<int> depth(TensorIndex idx) const;

    /// All tensors of the given total depth; if pinned >= 0 that factor is fixed to its top vector.
    std::vector<TensorIndex> tensors_of_depth(const std::vector<int>& total, int pinned = -1) const;

    /// Depth at which the h-weight vanishes, or empty when sum lambda_i is outside the root lattice.
    std::vector<int> zero_weight_depth() const;

    /// Zero-weight tensors in increasing order, and their positions.
    const std::vector<TensorIndex>& zero_weight() const { return zero_; }
    int zero_position(TensorIndex idx) const;

    /// op acting on one factor.
    TensorState apply(const SparseOp& op, int factor, const TensorState& v) const;

private:
    std::vector<const Irrep*> factors_;
    std::vector<TensorIndex> stride_;
    TensorIndex total_ = 1;
    std::vector<TensorIndex> zero_;
    std::unordered_map<TensorIndex, int> zero_pos_;
};

/// Functional on the tensor product supported on the zero-weight tensors;
/// coeffs[p] is its value on TensorProduct::zero_weight()[p].
struct InvariantFunctional {
    RatVector coeffs;

    Rational pair(const TensorProduct& tp, const TensorState& v) const;
    bool is_zero() const;
};

/// Basis of g-invariant functionals. A zero-weight functional killed by every e_i is
/// invariant, so only the e_i constraints are imposed.
std::vector<InvariantFunctional> invariants_basis(const TensorProduct& tp);

/// True when phi o rho(x) = 0 for every Chevalley generator e_i, f_i.
bool is_invariant(const TensorProduct& tp, const InvariantFunctional& phi);

struct BlockSpace {
    std::vector<Weight> weights;
    std::vector<Rational> points;
    int level = 0;
    std::vector<InvariantFunctional> invariants;
    std::vector<InvariantFunctional> basis;
    /// basis[b] = sum_c coords(c, b) invariants[c]
    RatMatrix coords;

    int dim() const { return static_cast<int>(basis.size()); }
};

/// Conformal blocks at level k cut out of the invariants by the gauge condition
/// phi((sum_{j != i} X_theta^{(j)}/(z_j - z_i))^{k - (theta, lambda_i) + 1} v) = 0
/// for every v whose i-th factor is the highest weight vector.
BlockSpace conformal_block_basis(const TensorProduct& tp, const std::vector<Rational>& points, int level);

/// Verlinde formula via the alcove sum of Weyl characters at q = exp(2 pi i / (k + g*)).
long verlinde_dimension(const RootSystem& rs, const std::vector<Weight>& weights, int level);

/// sl2 count of fusion paths 0 -> lambda_1 -> ... -> lambda_N -> 0; labels are Dynkin labels.
long fusion_path_count_sl2(const std::vector<int>& labels, int level);

}  // namespace kzu
