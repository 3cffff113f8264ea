#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace talenti {

/// One cell of a measured discretization: the |value| the function takes on
/// the cell and the measure of the cell.
struct Cell {
    double value;
    double measure;
};

/// A function on a measured discretization, reduced to (value, measure)
/// pairs. Signs are dropped at ingestion: rearrangement acts on |u|.
/// The total measure is accumulated with compensated summation.
class MeasuredFunction {
public:
    explicit MeasuredFunction(std::vector<Cell> cells);

    /// CSV with header `value,measure`.
    static MeasuredFunction from_csv(std::istream& in);
    static MeasuredFunction from_csv_file(const std::string& path);

    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    double total_measure() const { return total_measure_; }
    double max_value() const { return max_value_; }

    /// L^p norm w.r.t. the cell measure, 1 <= p < inf. Terms are summed in
    /// descending-value order so the rearranged function reproduces the norm
    /// bit for bit.
    double lp_norm(double p) const;

private:
    std::vector<Cell> cells_;
    double total_measure_ = 0.0;
    double max_value_ = 0.0;
};

/// The distribution function mu(t) = m({|u| > t}): a right-continuous,
/// nonincreasing step function with one breakpoint per distinct |u|-value.
class DistributionFunction {
public:
    /// mu(t).
    double operator()(double t) const;

    /// Distinct values, descending.
    const std::vector<double>& breakpoints() const { return values_; }
    /// cumulative()[i] = mu(t) for t in [values_[i+1], values_[i]).
    const std::vector<double>& cumulative() const { return cumulative_; }
    double total_measure() const { return total_measure_; }

private:
    friend DistributionFunction distribution_function(const MeasuredFunction&);
    std::vector<double> values_;
    std::vector<double> cumulative_;
    double total_measure_ = 0.0;
};

DistributionFunction distribution_function(const MeasuredFunction& u);

/// The decreasing rearrangement u#: [0, m(Omega)] -> [0,inf): the
/// left-continuous generalized inverse of mu, with u#(0) = max |u|.
class RearrangedFunction {
public:
    /// u#(s), left-continuous; u#(0) is the discrete ess-sup.
    double operator()(double s) const;

    /// int_0^s u#, exact piecewise-constant integration with a partial
    /// final cell.
    double integral(double s) const;

    double domain_measure() const { return domain_measure_; }
    double max_value() const;
    double lp_norm(double p) const;

    /// Step structure: distinct values (descending) and the cumulative
    /// measures at which each step ends.
    const std::vector<double>& step_values() const { return values_; }
    const std::vector<double>& step_ends() const { return cumulative_; }

    /// Cells sorted by descending value (ties keep input order).
    const std::vector<Cell>& sorted_cells() const { return sorted_cells_; }

private:
    friend RearrangedFunction decreasing_rearrangement(const MeasuredFunction&);
    std::vector<Cell> sorted_cells_;
    std::vector<double> values_;      // distinct, descending
    std::vector<double> cumulative_;  // partial sums, same length
    double domain_measure_ = 0.0;
};

RearrangedFunction decreasing_rearrangement(const MeasuredFunction& u);

/// The Schwarz symmetrization u*(x) = u#(H_N(x)) on [0, r_a], where
/// H_N([0, r_a]) = m(Omega). Radial, nonincreasing, equimeasurable with u.
class SchwarzSymmetrization {
public:
    double operator()(double x) const;

    double radius() const { return radius_; }
    double dimension() const { return N_; }
    double domain_measure() const;
    double max_value() const { return profile_.max_value(); }

    /// m_N({u* > t}), computed from the stored partial sums so that it
    /// matches mu(t) of the source function exactly.
    double superlevel_measure(double t) const;

    /// L^p norm w.r.t. m_N; equals the cell norm by construction.
    double lp_norm(double p) const { return profile_.lp_norm(p); }

    const RearrangedFunction& profile() const { return profile_; }

private:
    friend SchwarzSymmetrization schwarz_symmetrize(const MeasuredFunction&,
                                                    double);
    RearrangedFunction profile_;
    double N_ = 2.0;
    double radius_ = 0.0;
};

SchwarzSymmetrization schwarz_symmetrize(const MeasuredFunction& u, double N);

/// Hardy-Littlewood gap of a cell subset E:
///   int_0^{m(E)} f#(s) ds - int_E f dm  >=  0,
/// with equality when E collects the largest values first. Indices must be
/// distinct and in range.
double hardy_littlewood_gap(const MeasuredFunction& f,
                            const std::vector<std::size_t>& subset);

/// max over breakpoints t of |m({|u|>t}) - m_N({u*>t})|; zero exactly on the
/// discrete structures.
double equimeasurability_gap(const MeasuredFunction& u, double N);

}  // namespace talenti
