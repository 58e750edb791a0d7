#pragma once

#include "kzu/gram.hpp"
#include "kzu/pairing.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace kzu {

using Json = nlohmann::json;

// A concrete problem: algebra, weights, level and rational marked points, with everything built from them.
// Not movable: irreps point into the root system and the tensor product points into the irreps.
class Instance {
public:
    Instance(const std::string& algebra, const std::vector<std::vector<int>>& labels, int level,
             std::vector<Rational> points);
    Instance(const Instance&) = delete;
    Instance& operator=(const Instance&) = delete;

    const std::string& name() const { return name_; }
    const RootSystem& rs() const { return *rs_; }
    const std::vector<Weight>& weights() const { return weights_; }
    int level() const { return level_; }
    const std::vector<Rational>& points() const { return points_; }
    Config complex_points() const;
    const TensorProduct& tensor() const { return *tp_; }
    const Irrep& irrep(int i) const { return *irreps_.at(i); }
    const LieStructure& lie() const;
    const BlockSpace& blocks() const;
    // Installs a precomputed (cached) block basis; must match this instance.
    void set_blocks(BlockSpace bs);
    const BetaMap& beta() const;
    const MasterFunction& master() const;
    // Scalar forms of the block basis and of all invariants.
    const ScalarForm& block_form() const;
    const ScalarForm& invariant_form() const;
    Json describe() const;

private:
    std::string name_;
    std::unique_ptr<RootSystem> rs_;
    std::vector<Weight> weights_;
    int level_;
    std::vector<Rational> points_;
    std::vector<std::unique_ptr<Irrep>> irreps_;
    std::unique_ptr<TensorProduct> tp_;
    mutable std::unique_ptr<LieStructure> lie_;
    mutable std::unique_ptr<BlockSpace> blocks_;
    mutable std::unique_ptr<BetaMap> beta_;
    mutable std::unique_ptr<MasterFunction> mf_;
    mutable std::unique_ptr<std::vector<FormTerm>> closed_;
    mutable std::unique_ptr<ScalarForm> block_form_, invariant_form_;
};

// Dynkin labels from a list such as "w,w,0" (rank 1), "w1,w1+w2,2w2" or "(1,0),(0,1)".
// Items are separated by ',' or ';'; an empty list gives an empty result.
std::vector<std::vector<int>> parse_weight_list(const std::string& text, int rank);
std::vector<Rational> parse_point_list(const std::string& text);

struct CheckRecord {
    std::string instance;
    std::string check;
    Json value;
    Json tolerance;
    CheckStatus status = CheckStatus::Pass;
    bool counts = true;  // informational records do not affect the criterion status
};

Json to_json(const CheckRecord& r);

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<CheckRecord> checks;
    CheckStatus status = CheckStatus::Pass;
    double seconds = 0;
    std::string summary;

    void add(CheckRecord r);
    void finish();
};

Json to_json(const CriterionResult& r);

struct SuiteOptions {
    int max_rank = 8;
    std::uint64_t seed = 1;
    long samples = 400000;
    double unitarity_tol = 1e-2;
    double pairing_tol = 1e-4;
    double transport_tol = 1e-10;
    int random_points = 3;
};

CriterionResult criterion_roots(const SuiteOptions& opt);
CriterionResult criterion_block_dimensions(const SuiteOptions& opt);
CriterionResult criterion_form_equivalence(const SuiteOptions& opt);
CriterionResult criterion_injectivity(const SuiteOptions& opt);
CriterionResult criterion_extension(const SuiteOptions& opt);
CriterionResult criterion_kz_flatness(const SuiteOptions& opt);
CriterionResult criterion_affine_bound(const SuiteOptions& opt);
CriterionResult criterion_unitarity(const SuiteOptions& opt);
CriterionResult criterion_flat_pairing(const SuiteOptions& opt);

CriterionResult run_criterion(int id, const SuiteOptions& opt);
std::vector<CriterionResult> run_all(const SuiteOptions& opt);

// Per-instance check groups, shared by the CLI subcommands and the criteria.
void check_representations(const Instance& inst, CriterionResult& out);
// Block dimension against the Verlinde formula (and fusion paths for A1).
void check_blocks(const Instance& inst, CriterionResult& out);
// Closed formula against the gauge reduction, pole structure, injectivity and stratum degrees.
struct FormCheckOptions {
    bool equivalence = true;
    bool poles = true;
    bool injectivity = true;
    bool strata = true;
    std::uint64_t seed = 1;
};
void check_forms(const Instance& inst, CriterionResult& out, const FormCheckOptions& opt,
                 std::vector<StratumResult>* strata = nullptr);
void check_braid(const Instance& inst, CriterionResult& out);
// Reverse transport and monodromy of nearest-neighbour braid loops restricted to the block subspace.
void check_transport(const Instance& inst, CriterionResult& out, const TransportOptions& topt);
// Literal rectangle-curvature test, the curvature estimate and a non-flat control.
void check_curvature(const Instance& inst, CriterionResult& out, const TransportOptions& topt);

struct MetricRun {
    GramEstimate gram;
    UnitarityReport unitarity;
    ConvergenceReport convergence;
    bool unitarity_run = false;
    bool convergence_run = false;
    std::string skipped;  // reason when the unitarity test could not run
};

struct MetricOptions {
    UnitarityOptions unitarity;
    bool convergence = true;
    std::vector<Config> path;  // empty: a short default path from the instance points
};

// Gram matrix on the block basis and, when the block span is closed under every Omega_ij, unitarity.
MetricRun check_metric(const Instance& inst, CriterionResult& out, const MetricOptions& opt);

// Nearest-neighbour pairs (i, j) whose braid loops avoid the other points.
std::vector<std::pair<int, int>> default_loops(const Config& z);
std::vector<Config> default_metric_path(const Config& z);

// Instances used by the acceptance suite.
std::vector<std::unique_ptr<Instance>> form_suite_instances();

}  // namespace kzu
