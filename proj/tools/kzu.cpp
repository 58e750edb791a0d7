// kzu: command-line front end for the conformal-block, correlation-form, KZ and metric checks.
//
// Exit status: 0 all checks pass, 1 some check fails, 2 invalid configuration, 3 inconclusive.

#include "cache.hpp"

#include "kzu/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace kzu;
using kzu::cli::Cache;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInconclusive = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    std::string algebra;
    int rank = 0;
    int level = 0;
    std::string weights;
    std::string points;
    std::uint64_t seed = 1;
    long samples = 200000;
    double tol = 1e-2;
    double transport_tol = 1e-10;
    std::string out_dir = "kzu-out";
    std::string cache_dir;
    int max_rank = 8;
    std::string beta = "lex";
    bool have_weights = false;
};

// Raw flag values; a flag counts only when given on the command line.
struct Flags {
    Settings s;
    std::string config;
    CLI::App* sub = nullptr;
    bool given(const char* name) const { return sub->count(name) > 0; }
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file; flags override its keys");
    sub->add_option("--algebra", f.s.algebra, "Cartan type with or without rank, e.g. A or A1");
    sub->add_option("--rank", f.s.rank, "rank when --algebra is a bare letter");
    sub->add_option("--level", f.s.level, "positive integer level k");
    sub->add_option("--weights", f.s.weights, "weights, e.g. w,w,w,w or w1,w2 or (1,0),(0,1)");
    sub->add_option("--points", f.s.points, "distinct rational points, e.g. 0,1,3/2,7 (default 0,1,...)");
    sub->add_option("--seed", f.s.seed, "random seed");
    sub->add_option("--samples", f.s.samples, "Monte-Carlo sample budget");
    sub->add_option("--tol", f.s.tol, "tolerance of the statistical checks");
    sub->add_option("--transport-tol", f.s.transport_tol, "ODE error tolerance per unit path length");
    sub->add_option("--out-dir", f.s.out_dir, "directory for report.json and other artifacts");
    sub->add_option("--cache-dir", f.s.cache_dir, "content-addressed cache directory (off when empty)");
    sub->add_option("--max-rank", f.s.max_rank, "largest rank for the root-system suite");
}

std::string weights_from_json(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    std::ostringstream os;
    bool first = true;
    for (const auto& w : j) {
        os << (first ? "" : ",");
        first = false;
        if (w.is_string()) {
            os << w.get<std::string>();
        } else if (w.is_array()) {
            os << "(";
            for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i].get<int>();
            os << ")";
        } else {
            os << w.get<int>();
        }
    }
    return os.str();
}

std::string points_from_json(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    std::ostringstream os;
    for (std::size_t i = 0; i < j.size(); ++i) {
        os << (i ? "," : "");
        if (j[i].is_string()) {
            os << j[i].get<std::string>();
        } else {
            os << j[i].get<long>();
        }
    }
    return os.str();
}

Settings resolve(const Flags& f) {
    Settings s;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw ConfigError("cannot open config file " + f.config);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const std::exception& e) {
            throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
        }
        static const std::set<std::string> known{"algebra", "rank", "level",         "weights", "points",
                                                 "seed",    "samples", "tol", "transport_tol", "out_dir",
                                                 "cache_dir", "max_rank", "beta"};
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!known.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
        try {
            if (j.contains("algebra")) s.algebra = j["algebra"].get<std::string>();
            if (j.contains("rank")) s.rank = j["rank"].get<int>();
            if (j.contains("level")) s.level = j["level"].get<int>();
            if (j.contains("weights")) {
                s.weights = weights_from_json(j["weights"]);
                s.have_weights = true;
            }
            if (j.contains("points")) s.points = points_from_json(j["points"]);
            if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
            if (j.contains("samples")) s.samples = j["samples"].get<long>();
            if (j.contains("tol")) s.tol = j["tol"].get<double>();
            if (j.contains("transport_tol")) s.transport_tol = j["transport_tol"].get<double>();
            if (j.contains("out_dir")) s.out_dir = j["out_dir"].get<std::string>();
            if (j.contains("cache_dir")) s.cache_dir = j["cache_dir"].get<std::string>();
            if (j.contains("max_rank")) s.max_rank = j["max_rank"].get<int>();
            if (j.contains("beta")) s.beta = j["beta"].get<std::string>();
        } catch (const Json::exception& e) {
            throw ConfigError("bad value in config file: " + std::string(e.what()));
        }
    }
    if (f.given("--algebra")) s.algebra = f.s.algebra;
    if (f.given("--rank")) s.rank = f.s.rank;
    if (f.given("--level")) s.level = f.s.level;
    if (f.given("--weights")) {
        s.weights = f.s.weights;
        s.have_weights = true;
    }
    if (f.given("--points")) s.points = f.s.points;
    if (f.given("--seed")) s.seed = f.s.seed;
    if (f.given("--samples")) s.samples = f.s.samples;
    if (f.given("--tol")) s.tol = f.s.tol;
    if (f.given("--transport-tol")) s.transport_tol = f.s.transport_tol;
    if (f.given("--out-dir")) s.out_dir = f.s.out_dir;
    if (f.given("--cache-dir")) s.cache_dir = f.s.cache_dir;
    if (f.given("--max-rank")) s.max_rank = f.s.max_rank;

    if (s.samples < 1000) throw ConfigError("--samples must be at least 1000");
    if (!(s.tol > 0)) throw ConfigError("--tol must be positive");
    if (!(s.transport_tol > 0)) throw ConfigError("--transport-tol must be positive");
    if (s.max_rank < 1) throw ConfigError("--max-rank must be positive");
    if (s.beta != "lex") throw ConfigError("only the default beta policy 'lex' is supported");
    return s;
}

std::string algebra_name(const Settings& s) {
    if (s.algebra.empty()) throw ConfigError("--algebra is required");
    std::string name = s.algebra;
    if (name.size() == 1) {
        if (s.rank < 1) throw ConfigError("--rank is required with a bare Cartan letter");
        name += std::to_string(s.rank);
    } else if (s.rank != 0 && name.substr(1) != std::to_string(s.rank)) {
        throw ConfigError("--rank disagrees with --algebra " + s.algebra);
    }
    try {
        build_root_system(name);
    } catch (const std::exception& e) {
        throw ConfigError("unknown algebra '" + name + "': " + e.what());
    }
    return name;
}

// rep may omit the level; the smallest level containing every weight is used.
std::unique_ptr<Instance> make_instance(const Settings& s, bool level_optional = false) {
    const std::string name = algebra_name(s);
    const RootSystem rs = build_root_system(name);
    std::vector<std::vector<int>> labels;
    try {
        labels = parse_weight_list(s.weights, rs.rank());
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (labels.empty()) throw ConfigError("the weight list is empty");
    int level = s.level;
    if (level == 0 && level_optional) {
        level = 1;
        for (const auto& l : labels) {
            Weight w{RatVector(l.begin(), l.end())};
            while (!rs.in_alcove(w, level) && level < 1000) ++level;
        }
    }
    if (level < 1) throw ConfigError("--level must be a positive integer");
    std::vector<Rational> points;
    try {
        points = parse_point_list(s.points);
    } catch (const std::exception& e) {
        throw ConfigError("bad point list: " + std::string(e.what()));
    }
    if (points.empty())
        for (std::size_t i = 0; i < labels.size(); ++i) points.emplace_back(static_cast<long>(i));
    try {
        return std::make_unique<Instance>(name, labels, level, points);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

Json settings_json(const Settings& s, const Instance* inst) {
    Json j{{"seed", s.seed},
           {"samples", s.samples},
           {"tolerances", {{"statistical", s.tol}, {"transport", s.transport_tol}}},
           {"beta", s.beta}};
    if (inst) j["instance"] = inst->describe();
    return j;
}

CheckStatus overall(const std::vector<CheckRecord>& checks) {
    std::vector<CheckValue> v;
    for (const auto& c : checks)
        if (c.counts) {
            CheckValue cv;
            cv.status = c.status;
            v.push_back(cv);
        }
    return v.empty() ? CheckStatus::Pass : combine(v);
}

int exit_code(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return kExitPass;
        case CheckStatus::Fail: return kExitFail;
        case CheckStatus::Inconclusive: return kExitInconclusive;
    }
    return kExitFail;
}

CheckRecord record_from_json(const Json& j) {
    CheckRecord r;
    r.instance = j.at("instance").get<std::string>();
    r.check = j.at("check").get<std::string>();
    r.value = j.at("value");
    r.tolerance = j.at("tolerance");
    const auto st = j.at("status").get<std::string>();
    r.status = st == "pass" ? CheckStatus::Pass : st == "fail" ? CheckStatus::Fail : CheckStatus::Inconclusive;
    r.counts = j.at("counts").get<bool>();
    return r;
}

void print_checks(const std::vector<CheckRecord>& checks) {
    for (const auto& c : checks) {
        std::cout << (c.counts ? "[" + status_name(c.status) + "] " : "[info] ") << c.instance << " | " << c.check
                  << " | " << c.value.dump() << "\n";
    }
}

// Loads the block basis from the cache or computes and stores it.
void prepare_blocks(Instance& inst, Cache& cache) {
    const Json content = inst.describe();
    if (auto hit = cache.load("blocks", content)) {
        try {
            inst.set_blocks(cli::block_space_from_json(inst, *hit));
            std::cerr << "cache: blocks hit\n";
            return;
        } catch (const std::exception& e) {
            std::cerr << "warning: unusable cached block space (" << e.what() << "); recomputing\n";
        }
    }
    if (cache.enabled()) std::cerr << "cache: blocks miss\n";
    cache.store("blocks", content, cli::block_space_to_json(inst, inst.blocks()));
}

Json matrix_json(const CMatrix& m) {
    Json re = Json::array(), im = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json a = Json::array(), b = Json::array();
        for (int c = 0; c < m.cols(); ++c) {
            a.push_back(m(r, c).real());
            b.push_back(m(r, c).imag());
        }
        re.push_back(a);
        im.push_back(b);
    }
    return {{"re", re}, {"im", im}};
}

Json real_matrix_json(const Eigen::MatrixXd& m) {
    Json a = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        a.push_back(row);
    }
    return a;
}

struct Outcome {
    std::vector<CheckRecord> checks;
    Json extra = Json::object();
};

Outcome run_roots(const Settings& s) {
    Outcome o;
    if (s.algebra.empty()) {
        SuiteOptions opt;
        opt.max_rank = s.max_rank;
        o.checks = criterion_roots(opt).checks;
        return o;
    }
    const RootSystem rs = build_root_system(algebra_name(s));
    const auto rep = check_root_inequalities(rs);
    for (const auto& rec : rep.records) {
        std::ostringstream root;
        for (std::size_t i = 0; i < rec.root.coords.size(); ++i) root << (i ? "," : "") << rec.root.coords[i];
        o.checks.push_back({rs.name(), "I(delta) <= sum of squares <= 2 g* for root (" + root.str() + ")",
                            Json{{"i_delta", to_string(rec.i_delta)},
                                 {"sum_squares", to_string(rec.sum_squares)},
                                 {"two_gstar", to_string(rec.two_gstar)}},
                            nullptr, rec.pass ? CheckStatus::Pass : CheckStatus::Fail, true});
    }
    o.checks.push_back({rs.name(), "sum_i b_i (d_i, d_i) = 2 (g* - 1)",
                        Json{{"value", to_string(rep.theta_weighted_squares)},
                             {"target", to_string(rep.identity_target)}},
                        nullptr, rep.identity_pass ? CheckStatus::Pass : CheckStatus::Fail, true});
    return o;
}

void write_strata_csv(const fs::path& path, const std::vector<StratumResult>& strata, int count) {
    std::ostringstream os;
    os << "functional,kind,subset,target,codim,order,d_omega,master_term,d_romega,form_vanishes,pass\n";
    for (std::size_t k = 0; k < strata.size(); ++k) {
        const auto& r = strata[k];
        std::string subset;
        for (std::size_t a = 0; a < r.spec.subset.size(); ++a) subset += (a ? " " : "") + std::to_string(r.spec.subset[a]);
        // check_forms loops strata outermost and functionals inside
        const int functional = count > 0 ? static_cast<int>(k) % count : 0;
        os << functional << "," << stratum_name(r.spec.kind) << ",\"" << subset << "\","
           << (r.spec.kind == StratumKind::S2 ? r.spec.target_name() : "") << "," << r.codim << "," << r.order << ","
           << to_string(r.d_omega) << "," << to_string(r.master_term) << "," << to_string(r.d_romega) << ","
           << (r.form_vanishes ? 1 : 0) << "," << (r.pass ? 1 : 0) << "\n";
    }
    cli::write_atomic(path, os.str());
}

Outcome run_metric(const Settings& s, Instance& inst, Cache& cache, const fs::path& out) {
    Outcome o;
    const Json content{{"instance", inst.describe()}, {"seed", s.seed},           {"samples", s.samples},
                       {"tol", s.tol},                {"transport_tol", s.transport_tol}};
    if (auto hit = cache.load("metric", content)) {
        try {
            std::vector<CheckRecord> checks;
            for (const auto& c : hit->at("checks")) checks.push_back(record_from_json(c));
            cli::write_atomic(out / "gram.json", hit->at("gram").dump(2));
            cli::write_atomic(out / "samples.csv", hit->at("samples_csv").get<std::string>());
            std::cerr << "cache: metric hit\n";
            o.checks = std::move(checks);
            return o;
        } catch (const std::exception& e) {
            std::cerr << "warning: unusable cached metric (" << e.what() << "); recomputing\n";
        }
    }
    if (cache.enabled()) std::cerr << "cache: metric miss\n";

    CriterionResult cr;
    MetricOptions mo;
    mo.unitarity.mc.samples = s.samples;
    mo.unitarity.mc.seed = s.seed;
    mo.unitarity.tol = s.tol;
    mo.unitarity.step = 0.05;
    mo.unitarity.transport.tol = s.transport_tol;
    MetricRun run;
    try {
        run = check_metric(inst, cr, mo);
    } catch (const std::domain_error& e) {
        cr.add({inst.name(), "metric computable", e.what(), nullptr, CheckStatus::Fail, true});
    }
    o.checks = cr.checks;

    Json gram{{"instance", inst.describe()}, {"seed", s.seed}, {"samples", s.samples}};
    std::ostringstream csv;
    csv << "batch,a,b,re,im\n";
    if (run.gram.G.size() > 0) {
        const auto& G = run.gram;
        gram["batches"] = G.batch_means.size();
        gram["G"] = matrix_json(G.G);
        gram["stderr"] = {{"re", real_matrix_json(G.stderr_re)}, {"im", real_matrix_json(G.stderr_im)}};
        gram["min_eigenvalue"] = G.min_eigenvalue;
        gram["positive_definite"] = G.positive_definite;
        gram["hermitian_deviation_sigma"] = G.hermitian_deviation;
        gram["max_weight_share"] = G.max_weight_share;
        csv.precision(17);
        for (std::size_t b = 0; b < G.batch_means.size(); ++b)
            for (int r = 0; r < G.batch_means[b].rows(); ++r)
                for (int c = 0; c < G.batch_means[b].cols(); ++c)
                    csv << b << "," << r << "," << c << "," << G.batch_means[b](r, c).real() << ","
                        << G.batch_means[b](r, c).imag() << "\n";
    }
    if (run.unitarity_run) {
        Json cs = Json::array();
        for (double c : run.unitarity.fitted_c) cs.push_back(c);
        gram["monodromy_scale"] = cs;
    }
    if (!run.skipped.empty()) gram["unitarity_skipped"] = run.skipped;
    cli::write_atomic(out / "gram.json", gram.dump(2));
    cli::write_atomic(out / "samples.csv", csv.str());

    Json checks = Json::array();
    for (const auto& c : o.checks) checks.push_back(to_json(c));
    cache.store("metric", content, {{"checks", checks}, {"gram", gram}, {"samples_csv", csv.str()}});
    return o;
}

int run(const std::string& command, const Settings& s) {
    const fs::path out = s.out_dir;
    fs::create_directories(out);
    Cache cache(s.cache_dir.empty() ? fs::path{} : fs::path(s.cache_dir));
    Json report{{"tool", "kzu"}, {"command", command}};

    if (command == "verify-all") {
        SuiteOptions opt;
        opt.max_rank = s.max_rank;
        opt.seed = s.seed;
        opt.samples = s.samples;
        opt.unitarity_tol = s.tol;
        opt.transport_tol = s.transport_tol;
        report["config"] = settings_json(s, nullptr);
        const auto results = run_all(opt);
        Json criteria = Json::array();
        std::vector<CheckValue> statuses;
        for (const auto& r : results) {
            criteria.push_back(to_json(r));
            CheckValue cv;
            cv.status = r.status;
            statuses.push_back(cv);
            std::cout << "criterion " << r.id << ": " << status_name(r.status) << " - " << r.title << " ("
                      << r.summary << ")\n";
        }
        const CheckStatus st = combine(statuses);
        report["criteria"] = criteria;
        report["status"] = status_name(st);
        cli::write_atomic(out / "report.json", report.dump(2));
        return exit_code(st);
    }

    Outcome o;
    std::unique_ptr<Instance> inst;
    if (command == "roots") {
        report["config"] = settings_json(s, nullptr);
        report["config"]["max_rank"] = s.max_rank;
        o = run_roots(s);
    } else {
        inst = make_instance(s, command == "rep");
        report["config"] = settings_json(s, inst.get());
        if (command == "rep") {
            CriterionResult cr;
            check_representations(*inst, cr);
            o.checks = cr.checks;
        } else {
            prepare_blocks(*inst, cache);
            if (command == "blocks") {
                CriterionResult cr;
                check_blocks(*inst, cr);
                o.checks = cr.checks;
                o.extra["blocks"] = cli::block_space_to_json(*inst, inst->blocks());
            } else if (command == "sv") {
                try {
                    inst->beta();
                } catch (const std::exception& e) {
                    throw ConfigError(std::string("no simple-root map beta: ") + e.what());
                }
                CriterionResult cr;
                std::vector<StratumResult> strata;
                FormCheckOptions fo;
                fo.seed = s.seed;
                check_forms(*inst, cr, fo, &strata);
                write_strata_csv(out / "strata.csv", strata, inst->blocks().dim());
                o.checks = cr.checks;
            } else if (command == "kz") {
                CriterionResult cr;
                TransportOptions topt;
                topt.tol = s.transport_tol;
                check_braid(*inst, cr);
                check_transport(*inst, cr, topt);
                check_curvature(*inst, cr, topt);
                o.checks = cr.checks;
            } else if (command == "metric") {
                try {
                    inst->beta();
                } catch (const std::exception& e) {
                    throw ConfigError(std::string("no simple-root map beta: ") + e.what());
                }
                o = run_metric(s, *inst, cache, out);
            }
        }
    }
    const CheckStatus st = overall(o.checks);
    Json checks = Json::array();
    for (const auto& c : o.checks) checks.push_back(to_json(c));
    report["checks"] = checks;
    for (auto it = o.extra.begin(); it != o.extra.end(); ++it) report[it.key()] = it.value();
    report["status"] = status_name(st);
    cli::write_atomic(out / "report.json", report.dump(2));
    print_checks(o.checks);
    std::cout << "status: " << status_name(st) << "\n";
    return exit_code(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conformal blocks, correlation forms, KZ transport and the unitary metric"};
    app.require_subcommand(1);
    const std::vector<std::pair<std::string, std::string>> commands{
        {"roots", "root-system inequality suite"},
        {"rep", "irreducible representations and Casimir checks"},
        {"blocks", "conformal block dimensions against the Verlinde formula"},
        {"sv", "correlation forms: oracle equivalence, poles, injectivity, stratum degrees"},
        {"kz", "KZ connection: braid relations, transport, monodromy, curvature"},
        {"metric", "Gram metric and its unitarity along a path"},
        {"verify-all", "every acceptance criterion"}};
    std::vector<Flags> flags(commands.size());
    for (std::size_t i = 0; i < commands.size(); ++i) {
        flags[i].sub = app.add_subcommand(commands[i].first, commands[i].second);
        add_common(flags[i].sub, flags[i]);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    for (std::size_t i = 0; i < commands.size(); ++i) {
        if (!flags[i].sub->parsed()) continue;
        try {
            return run(commands[i].first, resolve(flags[i]));
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitConfig;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitFail;
        }
    }
    return kExitConfig;
}
