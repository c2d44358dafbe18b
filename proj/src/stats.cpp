#include "relcausal/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace relcausal {

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) * M_SQRT1_2);
}

namespace {

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), valid for x >= a + 1 (modified Lentz).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0) || x < 0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_squared_sf(double x, double df) {
    if (df <= 0) throw std::invalid_argument("chi_squared_sf: df must be positive");
    if (x <= 0) return 1.0;
    return gamma_q(df / 2.0, x / 2.0);
}

MeanCov mean_and_covariance(const std::vector<const std::vector<double>*>& columns) {
    const std::size_t k = columns.size();
    if (k == 0) return {};
    const std::size_t n = columns[0]->size();
    if (n < 2) throw std::invalid_argument("covariance needs at least two rows");

    MeanCov out;
    out.mean.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        if (columns[j]->size() != n) throw std::invalid_argument("ragged columns");
        double s = 0;
        for (double v : *columns[j]) s += v;
        out.mean[j] = s / static_cast<double>(n);
    }
    out.cov.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            double s = 0;
            const std::vector<double>& a = *columns[i];
            const std::vector<double>& b = *columns[j];
            for (std::size_t r = 0; r < n; ++r) {
                s += (a[r] - out.mean[i]) * (b[r] - out.mean[j]);
            }
            out.cov[i][j] = out.cov[j][i] = s / static_cast<double>(n - 1);
        }
    }
    return out;
}

bool invert_in_place(std::vector<std::vector<double>>& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(m[i][j]));
    }
    if (scale == 0.0) return false;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (std::abs(m[pivot][col]) < 1e-12 * scale) return false;
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        const double d = m[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = m[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    m = std::move(inv);
    return true;
}

}  // namespace relcausal
