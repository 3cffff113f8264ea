#include "talenti/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace talenti {

PchipInterpolant::PchipInterpolant(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
        throw std::invalid_argument("PchipInterpolant: need >= 2 nodes");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) {
            throw std::invalid_argument(
                "PchipInterpolant: abscissae must be strictly increasing");
        }
    }

    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        d[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    slope_.assign(n, 0.0);
    if (n == 2) {
        slope_[0] = slope_[1] = d[0];
    } else {
        // Interior: Fritsch-Carlson weighted harmonic mean; zero across
        // sign changes or flat segments, which preserves monotone data.
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] == 0.0 || d[i] == 0.0 ||
                (d[i - 1] > 0.0) != (d[i] > 0.0)) {
                slope_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // One-sided three-point endpoint slopes, clipped to keep shape.
        auto endpoint = [](double h0, double h1, double d0, double d1) {
            double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if ((s > 0.0) != (d0 > 0.0) || d0 == 0.0) {
                s = 0.0;
            } else if ((d0 > 0.0) != (d1 > 0.0) &&
                       std::fabs(s) > 3.0 * std::fabs(d0)) {
                s = 3.0 * d0;
            }
            return s;
        };
        slope_[0] = endpoint(h[0], h[1], d[0], d[1]);
        slope_[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    }
}

std::size_t PchipInterpolant::segment(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    if (it == x_.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double PchipInterpolant::operator()(double t) const {
    if (t <= x_.front()) return y_.front();
    if (t >= x_.back()) return y_.back();
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] +
           h11 * h * slope_[i + 1];
}

double PchipInterpolant::derivative(double t) const {
    if (t <= x_.front()) return slope_.front();
    if (t >= x_.back()) return slope_.back();
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double dh00 = (6.0 * s * s - 6.0 * s) / h;
    const double dh10 = 3.0 * s * s - 4.0 * s + 1.0;
    const double dh01 = -dh00;
    const double dh11 = 3.0 * s * s - 2.0 * s;
    return dh00 * y_[i] + dh10 * slope_[i] + dh01 * y_[i + 1] +
           dh11 * slope_[i + 1];
}

LinearInterpolant::LinearInterpolant(std::vector<double> x,
                                     std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() < 1 || y_.size() != x_.size()) {
        throw std::invalid_argument("LinearInterpolant: bad node data");
    }
    for (std::size_t i = 1; i < x_.size(); ++i) {
        if (!(x_[i] > x_[i - 1])) {
            throw std::invalid_argument(
                "LinearInterpolant: abscissae must be strictly increasing");
        }
    }
}

double LinearInterpolant::operator()(double t) const {
    if (t <= x_.front()) return y_.front();
    if (t >= x_.back()) return y_.back();
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double w = (t - x_[i]) / (x_[i + 1] - x_[i]);
    return (1.0 - w) * y_[i] + w * y_[i + 1];
}

}  // namespace talenti
