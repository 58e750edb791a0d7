#pragma once

#include "kzu/module.hpp"
#include "kzu/rational.hpp"

#include <memory>
#include <vector>

namespace kzu {

/// Level-k integrable highest-weight module of affine sl2 with top component V_j,
/// truncated at a maximal degree (eigenvalue of L_0 minus its value on the top).
class AffineSl2Module {
public:
    AffineSl2Module(int level, int label, int max_degree);

    int level() const { return level_; }
    int label() const { return label_; }
    int max_degree() const { return max_degree_; }
    int dim() const { return module_->dim(); }
    /// Number of basis vectors of each degree 0..max_degree.
    std::vector<int> degree_dimensions() const;

    /// Mode operator f(n) = f x xi^n; valid on vectors whose source and target degrees
    /// are both within the truncation.
    const SparseOp& f_mode(int n) const;
    int degree_of(int basis_index) const;

private:
    int level_, label_, max_degree_;
    std::unique_ptr<HighestWeightModule> module_;
    std::vector<SparseOp> f_neg_, f_pos_;  // f(-n), f(n) for n >= 0
};

struct AffineWordRecord {
    std::vector<int> modes;
    bool nonzero = false;
    Rational lhs;
    Rational bound;
    bool pass = true;
};

struct AffineBoundReport {
    int level = 0;
    int label = 0;
    int max_degree = 0;
    std::vector<AffineWordRecord> records;
    int nonzero_words = 0;
    int counterexamples = 0;
    bool pass = true;
};

/// For each word (b_1..b_L), builds f(b_1)...f(b_L)|lambda> and, when nonzero, checks
/// sum b_a <= (2(lambda, gamma) - (gamma, gamma))/(2k) with gamma = L alpha.
AffineBoundReport affine_bound_check(int level, int label, const std::vector<std::vector<int>>& words,
                                     int max_degree = 6);

/// Every word of length 1..max_length with |b_a| <= max_mode whose partial degrees stay
/// within [0, max_degree].
std::vector<std::vector<int>> admissible_words(int max_length, int max_mode, int max_degree);

}  // namespace kzu
