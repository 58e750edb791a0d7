#pragma once

#include "kzu/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace kzu {

enum class CartanType { A, B, C, D, E, F, G };

char type_letter(CartanType t);
CartanType parse_cartan_type(char letter);

/// Element of the root lattice, coordinates in the simple-root basis.
struct Root {
    std::vector<int> coords;

    int height() const;
    bool operator==(const Root& o) const { return coords == o.coords; }
    bool operator<(const Root& o) const { return coords < o.coords; }
};

/// Weight in the fundamental-weight basis (Dynkin labels).
struct Weight {
    RatVector coords;

    bool is_dominant_integral() const;
    bool operator==(const Weight& o) const { return coords == o.coords; }
};

struct RootDecomposition {
    /// multiplicity of each simple root
    std::vector<int> multiset;
    /// simple-root indices; every prefix sum is a positive root
    std::vector<int> witness;
};

/// Finite root system with the invariant form normalized so that (theta, theta) = 2.
class RootSystem {
public:
    CartanType type() const { return type_; }
    int rank() const { return rank_; }
    std::string name() const;

    /// Cartan integers 2(a_i, a_j)/(a_j, a_j).
    const std::vector<std::vector<int>>& cartan() const { return cartan_; }
    /// (a_i, a_j)
    const RatMatrix& gram() const { return gram_; }
    /// Positive roots ordered by height, then lexicographically.
    const std::vector<Root>& positive_roots() const { return positive_; }
    const Root& highest_root() const { return positive_.back(); }
    int dual_coxeter() const { return dual_coxeter_; }
    std::size_t dimension() const { return rank_ + 2 * positive_.size(); }

    Root simple_root(int i) const;
    /// Index into positive_roots(), or -1.
    int root_index(const Root& r) const;
    bool is_positive_root(const std::vector<int>& coords) const;

    Rational inner(const Root& a, const Root& b) const;
    Rational inner(const Weight& a, const Weight& b) const;
    Rational inner(const Weight& a, const Root& b) const;

    /// Simple-root coordinates of a weight (rational in general).
    RatVector weight_to_root_coords(const Weight& w) const;
    /// Dynkin labels of a root-lattice element.
    Weight root_to_weight(const std::vector<int>& coords) const;
    Weight fundamental_weight(int i) const;
    Weight zero_weight() const;
    /// Half the sum of positive roots, in simple-root coordinates.
    const RatVector& rho_root_coords() const { return rho_; }
    Weight rho() const;

    /// lambda in P_k, i.e. dominant integral with (lambda, theta) <= k.
    bool in_alcove(const Weight& w, int level) const;
    /// lambda lies in the root lattice
    bool in_root_lattice(const Weight& w) const;

    friend RootSystem build_root_system(CartanType type, int rank);

private:
    CartanType type_ = CartanType::A;
    int rank_ = 0;
    std::vector<std::vector<int>> cartan_;
    RatMatrix gram_;
    RatMatrix cartan_transpose_inverse_;
    std::vector<Root> positive_;
    std::map<std::vector<int>, int> index_;
    RatVector rho_;
    int dual_coxeter_ = 0;
};

RootSystem build_root_system(CartanType type, int rank);
/// Accepts names such as "A1", "G2", "E8".
RootSystem build_root_system(const std::string& name);

/// Standard Cartan matrix a_ij = 2(a_i,a_j)/(a_j,a_j), Bourbaki numbering.
std::vector<std::vector<int>> cartan_matrix(CartanType type, int rank);

/// Valid (type, rank) pairs up to the given rank.
std::vector<std::pair<CartanType, int>> all_simple_types(int max_rank);

RootDecomposition decompose_positive_root(const RootSystem& rs, const Root& delta);

struct RootInequalityRecord {
    Root root;
    Rational i_delta;
    Rational sum_squares;
    Rational two_gstar;
    bool pass = false;
};

struct RootInequalityReport {
    std::string algebra;
    int rank = 0;
    std::vector<RootInequalityRecord> records;
    /// sum_i b_i (d_i, d_i) for theta = sum_i b_i d_i
    Rational theta_weighted_squares;
    Rational identity_target;  // 2(g* - 1)
    bool identity_pass = false;
    bool pass = false;
};

RootInequalityReport check_root_inequalities(const RootSystem& rs);

}  // namespace kzu
