#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace talenti {

enum class FamilyKind { Model, Cone, PerturbedCone, ClosedForm, Tabulated };

/// A weighted half-line ([0,inf), euclidean distance, h(t) dt). The model
/// space is the special case h = h_N; cones are h(t) = c t^{N-1}; the
/// perturbed cone h_eps(t) = N omega_N (t + eps(1 - e^{-t}))^{N-1} is the
/// built-in CD(0,N), non-conic family with unit asymptotic volume ratio.
/// Immutable after construction; the cumulative-measure cache is internally
/// synchronized, so concurrent reads are safe.
class WeightedHalfLine {
public:
    static WeightedHalfLine model(double N);
    static WeightedHalfLine cone(double N, double c);
    static WeightedHalfLine perturbed_cone(double N, double eps);
    static WeightedHalfLine from_density(double N, std::string family_id,
                                         std::function<double(double)> h,
                                         std::optional<double> analytic_avr =
                                             std::nullopt);
    /// Tabulated density samples (t_i, h_i), linearly interpolated.
    static WeightedHalfLine from_samples(
        double N, const std::vector<std::pair<double, double>>& samples);

    FamilyKind kind() const { return kind_; }
    const std::string& family_id() const { return family_id_; }
    double dimension() const { return N_; }
    std::optional<double> analytic_avr() const { return avr_; }

    /// Density h(t).
    double density(double t) const;
    /// Cumulative measure H(t) = int_0^t h.
    double cumulative(double t) const;
    /// H^{-1}; monotone bisection/Newton for families without a closed form.
    double cumulative_inverse(double m) const;
    /// H(b) - H(a); throws on a reversed interval.
    double measure_of_interval(double a, double b) const;

private:
    WeightedHalfLine() = default;

    FamilyKind kind_ = FamilyKind::ClosedForm;
    std::string family_id_;
    double N_ = 2.0;
    double cone_coefficient_ = 0.0;  // Model/Cone: h(t) = coeff * t^{N-1}
    std::optional<double> avr_;
    std::function<double(double)> density_fn_;
    std::shared_ptr<class CumulativeIntegral> cumulative_cache_;
};

/// Discrete CD(0,N) admissibility check: h^{1/(N-1)} must be concave, i.e.
/// every second difference on the grid stays below +tolerance.
struct CdCheckReport {
    bool admissible = false;
    double worst_second_difference = 0.0;
    double grid_step = 0.0;
    double horizon = 0.0;
    double tolerance = 0.0;
};

CdCheckReport check_cd0n(const WeightedHalfLine& space, double grid_step,
                         double horizon = 20.0);

/// Richardson-extrapolated asymptotic volume ratio H(r)/(omega_N r^N) over a
/// geometric ladder of radii ending at r_max.
struct AvrEstimate {
    double value = 0.0;
    bool stabilized = false;
    double last_correction = 0.0;
};

AvrEstimate avr_estimate(const WeightedHalfLine& space, double r_max);

/// min over c>0 of sup_{t<=T} |H(t) - c omega_N t^N| / H(T). Zero exactly
/// for the model space and for any pure cone.
double cone_distance_proxy(const WeightedHalfLine& space, double horizon);

}  // namespace talenti
