#pragma once

#include "kzu/kzflow.hpp"

#include <vector>

namespace kzu {

// Pochhammer loop for one t variable: from `base`, around z_first, around z_second, then both inverted.
// Each lobe is a radial segment plus a full circle of `radius` about the initial position of the point.
struct PochhammerLoop {
    int first = 0;
    int second = 1;
    Complex base;
    double radius = 0.25;
};

struct QuadratureOptions {
    int segment_panels = 1;
    int circle_panels = 4;
};

// One node of a discretized loop: position, weight times dt/du, and the loop's own branch of
// sum_e e log(t - z_i) continued from the base point.
struct LoopNode {
    Complex t;
    Complex weight;
    Complex log_r;
};

// Integral of R * Omega(psi) over the product of one Pochhammer loop per t variable (M <= 2).
// `coeffs` are the coordinates of psi in the functionals underlying `g`.
// Branches: every factor starts from its principal value at the base configuration; t-z factors are
// then continued along each loop and t-t factors use the principal ratio to the base value, which
// is why distinct loops must occupy disjoint vertical strips.
class TwistedPeriod {
public:
    // Circles are centred at the positions in z0.
    TwistedPeriod(const ScalarForm& g, const MasterFunction& mf, std::vector<PochhammerLoop> cycle, const Config& z0,
                  QuadratureOptions opt = {});

    // Successive calls continue the base-point branches, so z should move in small steps.
    Complex operator()(const Config& z, const CVector& coeffs);
    // Distance from the cycle to the points z (must stay positive along any path).
    double clearance(const Config& z) const;
    int node_count() const;

private:
    std::vector<LoopNode> discretize(int a, const Config& z) const;

    const ScalarForm* g_;
    const MasterFunction* mf_;
    std::vector<PochhammerLoop> cycle_;
    QuadratureOptions opt_;
    Config centers_;
    bool have_branch_ = false;
    std::vector<Complex> base_logs_;  // one per exponent entry, continued across calls
};

struct FlatPairingReport {
    std::vector<double> s;
    std::vector<Complex> values;
    double drift = 0;
    double tolerance = 0;
    double clearance = 0;
    long transport_steps = 0;
    bool pass = false;
};

// Transports psi(0) = start along the z path and records the twisted period at `samples` + 1
// evenly spaced arc-length positions; drift is max |I(s) - I(0)| / |I(0)|.
FlatPairingReport verify_flat_pairing(const KZSystem& sys, const ScalarForm& g, const MasterFunction& mf,
                                      const CVector& start, const std::vector<PochhammerLoop>& cycle,
                                      const std::vector<Config>& path, int samples, double tol,
                                      const TransportOptions& topt = {}, const ConnectionFn& override_conn = {});

// Points along a polyline at equal arc-length spacing, with the polyline corners between them.
std::vector<std::vector<Config>> split_path(const std::vector<Config>& path, int pieces);

}  // namespace kzu
