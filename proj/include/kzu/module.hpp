#pragma once

#include "kzu/rational.hpp"
#include "kzu/sparse.hpp"

#include <functional>
#include <map>
#include <vector>

namespace kzu {

/// One weight space Lambda - sum_l depth[l] alpha_l of a highest-weight module.
struct WeightSpace {
    std::vector<int> depth;
    /// eigenvalues of the coroots h_i
    std::vector<Rational> labels;
    int dim = 0;
    int offset = 0;
};

struct ModuleOptions {
    /// Weight spaces whose depth fails this predicate are not built (truncation).
    std::function<bool(const std::vector<int>&)> keep;
    int max_dim = 10000;
};

/// Irreducible highest-weight module generated from |Lambda> by Chevalley lowering operators,
/// built weight space by weight space. A vector below the top is nonzero exactly when some
/// raising generator maps it to a nonzero vector, so each space is the span of f_i applied to
/// the space above, cut down to the rank of the map v -> (e_j v)_j. This is the quotient of the
/// Verma module by the radical of its contravariant form, computed recursively.
class HighestWeightModule {
public:
    /// pairing[l][i] = alpha_l(h_i); labels[i] = Lambda(h_i).
    HighestWeightModule(std::vector<std::vector<int>> pairing, std::vector<Rational> labels,
                        ModuleOptions options = {});

    int rank() const { return static_cast<int>(labels_.size()); }
    int dim() const { return dim_; }
    const std::vector<WeightSpace>& spaces() const { return spaces_; }
    /// Index of the space at this depth, or -1 when absent or zero.
    int space_index(const std::vector<int>& depth) const;

    /// Raising generator e_i as an operator on the whole (truncated) module.
    const SparseOp& e(int i) const { return e_.at(i); }
    const SparseOp& f(int i) const { return f_.at(i); }
    const SparseOp& h(int i) const { return h_.at(i); }

    /// Space index of every basis vector.
    const std::vector<int>& space_of() const { return space_of_; }

private:
    struct Local {
        std::vector<RatMatrix> f_in;   // f_i : V(n - e_i) -> V(n), empty if source absent
        std::vector<RatMatrix> e_out;  // e_i : V(n) -> V(n - e_i)
    };

    bool build_space(const std::vector<int>& depth);

    std::vector<std::vector<int>> pairing_;
    std::vector<Rational> labels_;
    ModuleOptions options_;
    std::vector<WeightSpace> spaces_;
    std::vector<Local> local_;
    std::map<std::vector<int>, int> index_;
    std::vector<SparseOp> e_, f_, h_;
    std::vector<int> space_of_;
    int dim_ = 0;
};

}  // namespace kzu
