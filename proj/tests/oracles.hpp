#pragma once

// Independent reference computations used only by tests. None of these
// call into the library's numeric code.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

/// Cohen's kappa from an explicit contingency table of label pairs.
inline double kappa(const std::vector<int>& a, const std::vector<int>& b)
{
    std::map<std::pair<int, int>, double> table;
    std::map<int, double> row, col;
    const double n = static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        table[{a[i], b[i]}] += 1.0;
        row[a[i]] += 1.0;
        col[b[i]] += 1.0;
    }
    double po = 0.0;
    for (const auto& [key, count] : table)
        if (key.first == key.second)
            po += count / n;
    double pe = 0.0;
    for (const auto& [label, count] : row)
        if (col.count(label))
            pe += (count / n) * (col[label] / n);
    if (pe >= 1.0 - 1e-12)
        return a.front() == b.front() ? 1.0 : 0.0;
    return (po - pe) / (1.0 - pe);
}

inline double fleiss(const std::vector<std::vector<int>>& counts)
{
    const std::size_t items = counts.size(), cats = counts.front().size();
    double p_bar = 0.0, total = 0.0;
    std::vector<double> cat_total(cats, 0.0);
    for (const auto& row : counts) {
        double n = 0.0, s = 0.0;
        for (std::size_t j = 0; j < cats; ++j) {
            n += row[j];
            s += row[j] * (row[j] - 1.0);
            cat_total[j] += row[j];
        }
        total += n;
        p_bar += s / (n * (n - 1.0));
    }
    p_bar /= static_cast<double>(items);
    double pe = 0.0;
    for (double t : cat_total)
        pe += (t / total) * (t / total);
    if (p_bar == 1.0)
        return 1.0;
    return (p_bar - pe) / (1.0 - pe);
}

/// Plain double sum of squares of (a - b) over listed cells.
inline double frobenius(const std::vector<double>& diffs)
{
    double s = 0.0;
    for (double d : diffs)
        s += d * d;
    return std::sqrt(s);
}

/// Minimum normalized residual of similarity-aligning target onto
/// reference, by scanning the rotation angle for both handednesses.
/// For a fixed angle the optimal scale is closed-form.
inline double procrustes_scan(const std::vector<std::array<double, 2>>& ref,
                              const std::vector<std::array<double, 2>>& tgt)
{
    const std::size_t n = ref.size();
    auto centre = [n](std::vector<std::array<double, 2>> p) {
        double mx = 0, my = 0;
        for (auto& q : p) {
            mx += q[0];
            my += q[1];
        }
        mx /= static_cast<double>(n);
        my /= static_cast<double>(n);
        for (auto& q : p) {
            q[0] -= mx;
            q[1] -= my;
        }
        return p;
    };
    const auto r = centre(ref);
    const auto t = centre(tgt);
    double sr = 0, st = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sr += r[i][0] * r[i][0] + r[i][1] * r[i][1];
        st += t[i][0] * t[i][0] + t[i][1] * t[i][1];
    }
    auto residual = [&](double theta, bool flip) {
        const double c = std::cos(theta), s = std::sin(theta);
        double dot = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = t[i][0], y = flip ? -t[i][1] : t[i][1];
            dot += r[i][0] * (c * x - s * y) + r[i][1] * (s * x + c * y);
        }
        const double scale = std::max(0.0, dot / st);
        double res = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = t[i][0], y = flip ? -t[i][1] : t[i][1];
            const double dx = r[i][0] - scale * (c * x - s * y);
            const double dy = r[i][1] - scale * (s * x + c * y);
            res += dx * dx + dy * dy;
        }
        return res / sr;
    };
    double best = 1e300;
    for (bool flip : {false, true}) {
        const int steps = 7200;
        double best_theta = 0, best_val = 1e300;
        for (int k = 0; k < steps; ++k) {
            const double theta = 2 * std::numbers::pi * k / steps;
            const double v = residual(theta, flip);
            if (v < best_val) {
                best_val = v;
                best_theta = theta;
            }
        }
        // Golden-section refinement around the best grid angle.
        double lo = best_theta - 2 * std::numbers::pi / steps;
        double hi = best_theta + 2 * std::numbers::pi / steps;
        const double g = (std::sqrt(5.0) - 1) / 2;
        for (int it = 0; it < 200; ++it) {
            const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
            if (residual(a, flip) < residual(b, flip))
                hi = b;
            else
                lo = a;
        }
        best = std::min({best, best_val, residual((lo + hi) / 2, flip)});
    }
    return best;
}

/// Expected Cohen's kappa between two annotators that each copy the same
/// latent label (uniform over C) and flip it to a uniformly chosen other
/// label with probability rho, from p_o and p_e directly.
inline double within_cluster_kappa(int c, double rho)
{
    const double po = (1 - rho) * (1 - rho) + rho * rho / (c - 1);
    const double pe = 1.0 / c;
    return (po - pe) / (1 - pe);
}

} // namespace oracle
