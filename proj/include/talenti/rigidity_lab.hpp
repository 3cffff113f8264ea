#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "talenti/comparison.hpp"
#include "talenti/radial_solver.hpp"
#include "talenti/weighted_space.hpp"

namespace talenti {

/// Raised when a sweep member fails the CD(0,N) admissibility check.
struct InadmissibleSpaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parametrized family sweep: one comparison instance per parameter,
/// recording the comparison deficit against the cone-distance proxy.
struct SweepSpec {
    std::string family = "perturbed_cone";  // or "sector"
    std::vector<double> params;             // sorted ascending
    double N = 2.0;
    double p = 2.0;
    double R = 1.0;
    double proxy_horizon = 10.0;
    double cd_grid_step = 0.01;
    double cd_horizon = 20.0;
    bool record_timings = false;

    void validate() const;
};

struct SweepRow {
    double param = 0.0;
    double avr = 0.0;
    double deficit = 0.0;
    double cone_proxy = 0.0;
    bool equality_detected = false;
    double seconds = 0.0;  // zero unless record_timings is set
};

struct SweepResult {
    std::vector<SweepRow> rows;
    bool pass = false;
    double spearman = 0.0;
    std::string verdict_detail;

    std::string verdict_json() const;
    static std::string csv_header();
    std::string csv_rows() const;
};

/// Builds the family member for one sweep parameter.
WeightedHalfLine sweep_member(const SweepSpec& spec, double param);

/// The comparison deficit ||avr^{q/N} u* - v||_{L^p(m_N)} of the 1-D
/// instance with datum f == 1 on [0, R).
double deficit_1d(const WeightedHalfLine& space, double R, double p);

/// Runs the sweep. Verdict PASS iff the most conic member's deficit sits
/// within tolerance and deficit/cone-proxy are co-monotone across the
/// ladder (all-cone ladders pass on the deficit criterion alone). Throws
/// std::runtime_error if any member fails the CD(0,N) check.
SweepResult run_family_sweep(const SweepSpec& spec);

/// Spearman rank correlation; ranks use midpoints on ties.
double spearman_correlation(const std::vector<double>& a,
                            const std::vector<double>& b);

}  // namespace talenti
