#pragma once

#include <vector>

namespace talenti {

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson slopes.
/// Monotone data produce a monotone interpolant, which is what the
/// cumulative-integral lookups rely on. Evaluation is clamped to the
/// node range.
class PchipInterpolant {
public:
    PchipInterpolant() = default;
    PchipInterpolant(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;
    double derivative(double t) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::size_t segment(double t) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

/// Piecewise linear interpolant, clamped outside the node range.
class LinearInterpolant {
public:
    LinearInterpolant() = default;
    LinearInterpolant(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
};

}  // namespace talenti
