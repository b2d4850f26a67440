#include "fraclab/extrapolate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fraclab {

namespace {

// Aitken limit from a consecutive triple (decreasing r); returns false when
// the differences do not contract.
bool aitken(double y2, double y1, double y0, double noise, double& limit) {
    const double d1 = y1 - y2;
    const double d0 = y0 - y1;
    if (std::abs(d0) <= noise || std::abs(d1) <= noise) return false;
    const double rho = d0 / d1;
    if (!(rho > 0.03 && rho < 0.97)) return false;
    limit = y0 + d0 * rho / (1.0 - rho);
    return true;
}

} // namespace

LimitEstimate extrapolate_to_zero(const std::vector<double>& radii,
                                  const std::vector<double>& values, double noise) {
    if (radii.size() != values.size() || values.empty())
        throw std::invalid_argument("extrapolate_to_zero: bad ladder");
    const std::size_t m = values.size();
    noise = std::max(noise, 1e-13 * (1.0 + std::abs(values.back())));

    LimitEstimate est;
    est.value = values[m - 1];
    est.uncertainty = m >= 2 ? std::max(noise, std::abs(values[m - 1] - values[m - 2])) : noise;

    if (m < 3) return est;

    double lim0;
    if (aitken(values[m - 3], values[m - 2], values[m - 1], noise, lim0)) {
        est.value = lim0;
        est.extrapolated = true;
        est.uncertainty = std::max(noise, 0.5 * std::abs(lim0 - values[m - 1]));
        if (m >= 4) {
            double lim1;
            if (aitken(values[m - 4], values[m - 3], values[m - 2], noise, lim1))
                est.uncertainty = std::max(est.uncertainty, std::abs(lim0 - lim1));
        }
    } else if (std::abs(values[m - 1] - values[m - 2]) <= 3.0 * noise) {
        // Flat tail: average the two smallest radii.
        est.value = 0.5 * (values[m - 1] + values[m - 2]);
        est.uncertainty = std::max(noise, std::abs(values[m - 1] - values[m - 2]));
    }
    return est;
}

double ladder_log_slope(const std::vector<double>& radii, const std::vector<double>& values,
                        std::size_t k) {
    if (k == 0 || k + 1 >= values.size())
        throw std::invalid_argument("ladder_log_slope: index must be interior");
    const double floor = 1e-300;
    const double num = std::log(std::max(values[k - 1], floor)) -
                       std::log(std::max(values[k + 1], floor));
    const double den = std::log(radii[k - 1]) - std::log(radii[k + 1]);
    return num / den;
}

} // namespace fraclab
