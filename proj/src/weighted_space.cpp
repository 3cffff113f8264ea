#include "talenti/weighted_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "talenti/interpolation.hpp"
#include "talenti/model_space.hpp"
#include "talenti/quadrature.hpp"

namespace talenti {

namespace {

void require_dimension(double N) {
    if (!(N > 1.0) || !std::isfinite(N)) {
        throw std::domain_error("weighted space: N must be finite and > 1");
    }
}

}  // namespace

WeightedHalfLine WeightedHalfLine::model(double N) {
    require_dimension(N);
    WeightedHalfLine s;
    s.kind_ = FamilyKind::Model;
    s.family_id_ = "model";
    s.N_ = N;
    s.cone_coefficient_ = N * omega_n(N);
    s.avr_ = 1.0;
    return s;
}

WeightedHalfLine WeightedHalfLine::cone(double N, double c) {
    require_dimension(N);
    if (!(c > 0.0)) throw std::domain_error("cone: coefficient must be > 0");
    WeightedHalfLine s;
    s.kind_ = FamilyKind::Cone;
    s.family_id_ = "cone";
    s.N_ = N;
    s.cone_coefficient_ = c;
    s.avr_ = c / (N * omega_n(N));
    return s;
}

WeightedHalfLine WeightedHalfLine::perturbed_cone(double N, double eps) {
    require_dimension(N);
    if (eps < 0.0) {
        throw std::domain_error("perturbed_cone: eps must be >= 0");
    }
    if (eps == 0.0) return model(N);
    WeightedHalfLine s;
    s.kind_ = FamilyKind::PerturbedCone;
    s.family_id_ = "perturbed_cone";
    s.N_ = N;
    const double scale = N * omega_n(N);
    s.density_fn_ = [N, eps, scale](double t) {
        return scale * std::pow(t + eps * (1.0 - std::exp(-t)), N - 1.0);
    };
    s.avr_ = 1.0;  // h_eps(t) ~ h_N(t + eps) at infinity
    s.cumulative_cache_ =
        std::make_shared<CumulativeIntegral>(s.density_fn_, 1e-10);
    return s;
}

WeightedHalfLine WeightedHalfLine::from_density(
    double N, std::string family_id, std::function<double(double)> h,
    std::optional<double> analytic_avr) {
    require_dimension(N);
    WeightedHalfLine s;
    s.kind_ = FamilyKind::ClosedForm;
    s.family_id_ = std::move(family_id);
    s.N_ = N;
    s.density_fn_ = std::move(h);
    s.avr_ = analytic_avr;
    s.cumulative_cache_ =
        std::make_shared<CumulativeIntegral>(s.density_fn_, 1e-10);
    return s;
}

WeightedHalfLine WeightedHalfLine::from_samples(
    double N, const std::vector<std::pair<double, double>>& samples) {
    require_dimension(N);
    if (samples.size() < 2) {
        throw std::invalid_argument("from_samples: need >= 2 samples");
    }
    std::vector<double> t, h;
    t.reserve(samples.size());
    h.reserve(samples.size());
    for (const auto& [ti, hi] : samples) {
        if (hi < 0.0 || !std::isfinite(hi)) {
            throw std::invalid_argument("from_samples: density must be >= 0");
        }
        t.push_back(ti);
        h.push_back(hi);
    }
    LinearInterpolant interp(std::move(t), std::move(h));
    WeightedHalfLine s;
    s.kind_ = FamilyKind::Tabulated;
    s.family_id_ = "tabulated";
    s.N_ = N;
    s.density_fn_ = [interp](double x) { return interp(x); };
    s.cumulative_cache_ =
        std::make_shared<CumulativeIntegral>(s.density_fn_, 1e-10);
    return s;
}

double WeightedHalfLine::density(double t) const {
    if (t < 0.0) throw std::domain_error("density: t must be >= 0");
    switch (kind_) {
        case FamilyKind::Model:
        case FamilyKind::Cone:
            return t == 0.0 ? 0.0
                            : cone_coefficient_ * std::pow(t, N_ - 1.0);
        default:
            return density_fn_(t);
    }
}

double WeightedHalfLine::cumulative(double t) const {
    if (t < 0.0) throw std::domain_error("cumulative: t must be >= 0");
    switch (kind_) {
        case FamilyKind::Model:
        case FamilyKind::Cone:
            return cone_coefficient_ / N_ * std::pow(t, N_);
        default:
            return (*cumulative_cache_)(t);
    }
}

double WeightedHalfLine::cumulative_inverse(double m) const {
    if (m < 0.0) {
        throw std::domain_error("cumulative_inverse: measure must be >= 0");
    }
    if (m == 0.0) return 0.0;
    switch (kind_) {
        case FamilyKind::Model:
        case FamilyKind::Cone:
            return std::pow(N_ * m / cone_coefficient_, 1.0 / N_);
        default:
            break;
    }
    // Bracket then bisect/Newton on the monotone cumulative.
    double hi = 1.0;
    while (cumulative(hi) < m) {
        hi *= 2.0;
        if (hi > 1e12) {
            throw std::runtime_error("cumulative_inverse: measure too large");
        }
    }
    double lo = 0.0;
    double x = 0.5 * hi;
    for (int it = 0; it < 200; ++it) {
        const double Hx = cumulative(x);
        if (Hx < m) {
            lo = x;
        } else {
            hi = x;
        }
        const double h = density(x);
        double next = (h > 0.0) ? x - (Hx - m) / h : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 1e-14 * std::max(1.0, std::fabs(x))) {
            return next;
        }
        x = next;
    }
    return x;
}

double WeightedHalfLine::measure_of_interval(double a, double b) const {
    if (a < 0.0 || b < a) {
        throw std::invalid_argument(
            "measure_of_interval: need 0 <= a <= b");
    }
    if (a == b) return 0.0;
    return cumulative(b) - cumulative(a);
}

CdCheckReport check_cd0n(const WeightedHalfLine& space, double grid_step,
                         double horizon) {
    if (!(grid_step > 0.0) || !(horizon > grid_step)) {
        throw std::invalid_argument("check_cd0n: bad grid");
    }
    const double exponent = 1.0 / (space.dimension() - 1.0);
    const std::size_t n =
        static_cast<std::size_t>(std::floor(horizon / grid_step)) + 1;

    std::vector<double> g(n);
    double g_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = space.density(static_cast<double>(i) * grid_step);
        if (!std::isfinite(h)) {
            throw std::runtime_error("check_cd0n: non-finite density sample");
        }
        g[i] = std::pow(h, exponent);
        g_max = std::max(g_max, std::fabs(g[i]));
    }

    CdCheckReport report;
    report.grid_step = grid_step;
    report.horizon = horizon;
    report.tolerance = 1e-8 * g_max;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        worst = std::max(worst, g[i + 1] - 2.0 * g[i] + g[i - 1]);
    }
    report.worst_second_difference = worst;
    report.admissible = worst <= report.tolerance;
    return report;
}

AvrEstimate avr_estimate(const WeightedHalfLine& space, double r_max) {
    if (!(r_max > 0.0)) {
        throw std::invalid_argument("avr_estimate: r_max must be > 0");
    }
    const double N = space.dimension();
    const double w = omega_n(N);
    constexpr int kLadder = 5;

    // Volume ratios on r_max/16, r_max/8, ..., r_max; the ratio behaves like
    // L + c_1/r + c_2/r^2 + ..., so Richardson in 1/r with ratio 2 applies.
    double tableau[kLadder];
    for (int k = 0; k < kLadder; ++k) {
        const double r = r_max * std::pow(2.0, k - (kLadder - 1));
        tableau[k] = space.cumulative(r) / (w * std::pow(r, N));
    }
    double previous_diag = tableau[kLadder - 1];
    for (int j = 1; j < kLadder; ++j) {
        const double factor = std::pow(2.0, j);
        for (int k = 0; k + j < kLadder; ++k) {
            tableau[k] = (factor * tableau[k + 1] - tableau[k]) /
                         (factor - 1.0);
        }
        if (j == kLadder - 2) previous_diag = tableau[0];
    }

    AvrEstimate out;
    out.value = std::max(0.0, tableau[0]);
    out.last_correction = std::fabs(tableau[0] - previous_diag);
    out.stabilized =
        out.last_correction <= 1e-6 * std::max(1.0, std::fabs(tableau[0]));
    return out;
}

double cone_distance_proxy(const WeightedHalfLine& space, double horizon) {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("cone_distance_proxy: horizon must be > 0");
    }
    const double N = space.dimension();
    const double w = omega_n(N);
    const double total = space.cumulative(horizon);
    if (!(total > 0.0)) return 0.0;

    constexpr int kGrid = 512;
    std::vector<double> H(kGrid), tN(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        const double t = horizon * (i + 1) / kGrid;
        H[i] = space.cumulative(t);
        tN[i] = w * std::pow(t, N);
    }

    auto sup_deviation = [&](double c) {
        double worst = 0.0;
        for (int i = 0; i < kGrid; ++i) {
            worst = std::max(worst, std::fabs(H[i] - c * tN[i]));
        }
        return worst / total;
    };

    // sup of affine functions of c is convex; golden-section over a bracket
    // that always contains the minimizer.
    double lo = 0.0;
    double hi = 2.0 * total / (w * std::pow(horizon, N)) + 1.0;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = sup_deviation(x1);
    double f2 = sup_deviation(x2);
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * (1.0 + hi); ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = sup_deviation(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = sup_deviation(x2);
        }
    }
    return std::min(f1, f2);
}

}  // namespace talenti
