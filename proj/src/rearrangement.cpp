#include "talenti/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "talenti/model_space.hpp"
#include "talenti/summation.hpp"

namespace talenti {

namespace {

std::vector<Cell> sorted_descending(const std::vector<Cell>& cells) {
    std::vector<Cell> out = cells;
    std::stable_sort(out.begin(), out.end(),
                     [](const Cell& a, const Cell& b) {
                         return a.value > b.value;
                     });
    return out;
}

// Shared by MeasuredFunction and RearrangedFunction so that the rearranged
// norm reproduces the source norm bit for bit.
double lp_norm_sorted(const std::vector<Cell>& sorted, double p) {
    if (!(p >= 1.0)) {
        throw std::domain_error("lp_norm: p must be >= 1");
    }
    CompensatedSum acc;
    for (const Cell& c : sorted) {
        acc.add(std::pow(c.value, p) * c.measure);
    }
    return std::pow(acc.result(), 1.0 / p);
}

// Distinct descending values with compensated partial sums of measure.
void merge_steps(const std::vector<Cell>& sorted, std::vector<double>& values,
                 std::vector<double>& cumulative) {
    values.clear();
    cumulative.clear();
    CompensatedSum acc;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        acc.add(sorted[i].measure);
        if (i + 1 < sorted.size() && sorted[i + 1].value == sorted[i].value) {
            continue;
        }
        values.push_back(sorted[i].value);
        cumulative.push_back(acc.result());
    }
}

// mu(t) = sum of measures of cells with value > t, from the merged steps.
double mu_lookup(const std::vector<double>& values,
                 const std::vector<double>& cumulative, double t) {
    // First index with values[i] <= t (values are descending).
    auto it = std::lower_bound(values.begin(), values.end(), t,
                               [](double v, double tt) { return v > tt; });
    if (it == values.begin()) return 0.0;
    return cumulative[static_cast<std::size_t>(it - values.begin()) - 1];
}

}  // namespace

MeasuredFunction::MeasuredFunction(std::vector<Cell> cells)
    : cells_(std::move(cells)) {
    if (cells_.empty()) {
        throw std::invalid_argument("MeasuredFunction: no cells");
    }
    CompensatedSum total;
    for (Cell& c : cells_) {
        if (!(c.measure > 0.0) || !std::isfinite(c.measure) ||
            !std::isfinite(c.value)) {
            throw std::invalid_argument(
                "MeasuredFunction: cells need finite value and measure > 0");
        }
        c.value = std::fabs(c.value);
        total.add(c.measure);
        max_value_ = std::max(max_value_, c.value);
    }
    total_measure_ = total.result();
}

MeasuredFunction MeasuredFunction::from_csv(std::istream& in) {
    std::string line;
    std::vector<Cell> cells;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.find("value") != std::string::npos) continue;
        }
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b)) {
            throw std::runtime_error("MeasuredFunction csv: bad row: " + line);
        }
        cells.push_back({std::stod(a), std::stod(b)});
    }
    return MeasuredFunction(std::move(cells));
}

MeasuredFunction MeasuredFunction::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("MeasuredFunction: cannot open " + path);
    }
    return from_csv(in);
}

double MeasuredFunction::lp_norm(double p) const {
    return lp_norm_sorted(sorted_descending(cells_), p);
}

double DistributionFunction::operator()(double t) const {
    if (t < 0.0) throw std::domain_error("distribution function: t >= 0");
    return mu_lookup(values_, cumulative_, t);
}

DistributionFunction distribution_function(const MeasuredFunction& u) {
    DistributionFunction mu;
    merge_steps(sorted_descending(u.cells()), mu.values_, mu.cumulative_);
    mu.total_measure_ = u.total_measure();
    return mu;
}

double RearrangedFunction::operator()(double s) const {
    if (s < 0.0) throw std::domain_error("rearrangement: s >= 0");
    if (s == 0.0) return values_.front();
    // u#(s) = values_[i] on (cumulative_[i-1], cumulative_[i]].
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), s);
    if (it == cumulative_.end()) return 0.0;
    return values_[static_cast<std::size_t>(it - cumulative_.begin())];
}

double RearrangedFunction::integral(double s) const {
    if (s < 0.0) throw std::domain_error("rearrangement integral: s >= 0");
    // Greedy walk over sorted cells with a partial final cell. Plain
    // accumulation, matching the sort-based Hardy-Littlewood oracle.
    double acc = 0.0;
    double cum = 0.0;
    for (const Cell& c : sorted_cells_) {
        if (cum + c.measure <= s) {
            acc += c.value * c.measure;
            cum += c.measure;
        } else {
            if (s > cum) acc += c.value * (s - cum);
            return acc;
        }
    }
    return acc;
}

double RearrangedFunction::max_value() const { return values_.front(); }

double RearrangedFunction::lp_norm(double p) const {
    return lp_norm_sorted(sorted_cells_, p);
}

RearrangedFunction decreasing_rearrangement(const MeasuredFunction& u) {
    RearrangedFunction r;
    r.sorted_cells_ = sorted_descending(u.cells());
    merge_steps(r.sorted_cells_, r.values_, r.cumulative_);
    r.domain_measure_ = u.total_measure();
    return r;
}

double SchwarzSymmetrization::operator()(double x) const {
    if (x < 0.0) throw std::domain_error("symmetrization: x >= 0");
    if (x > radius_ * (1.0 + 1e-12)) return 0.0;
    const double s = std::min(big_h_n(N_, x), profile_.domain_measure());
    return profile_(s);
}

double SchwarzSymmetrization::domain_measure() const {
    return profile_.domain_measure();
}

double SchwarzSymmetrization::superlevel_measure(double t) const {
    return mu_lookup(profile_.step_values(), profile_.step_ends(), t);
}

SchwarzSymmetrization schwarz_symmetrize(const MeasuredFunction& u, double N) {
    SchwarzSymmetrization s;
    s.profile_ = decreasing_rearrangement(u);
    s.N_ = N;
    s.radius_ = big_h_inv(N, u.total_measure());
    return s;
}

double hardy_littlewood_gap(const MeasuredFunction& f,
                            const std::vector<std::size_t>& subset) {
    std::vector<char> seen(f.size(), 0);
    CompensatedSum subset_measure;
    CompensatedSum subset_integral;
    for (std::size_t idx : subset) {
        if (idx >= f.size() || seen[idx]) {
            throw std::invalid_argument(
                "hardy_littlewood_gap: subset indices must be distinct and "
                "in range");
        }
        seen[idx] = 1;
        subset_measure.add(f.cells()[idx].measure);
        subset_integral.add(f.cells()[idx].value * f.cells()[idx].measure);
    }
    const RearrangedFunction fr = decreasing_rearrangement(f);
    return fr.integral(subset_measure.result()) - subset_integral.result();
}

double equimeasurability_gap(const MeasuredFunction& u, double N) {
    const DistributionFunction mu = distribution_function(u);
    const SchwarzSymmetrization star = schwarz_symmetrize(u, N);
    double worst = 0.0;
    for (double t : mu.breakpoints()) {
        worst = std::max(worst, std::fabs(mu(t) - star.superlevel_measure(t)));
    }
    return worst;
}

}  // namespace talenti
