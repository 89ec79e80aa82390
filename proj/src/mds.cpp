#include "tendeval/mds.hpp"

#include "tendeval/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace tendeval {

std::size_t DissimilarityMatrix::imputed_pair_count() const
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            if (imputed[i * size() + j])
                ++n;
    return n;
}

DissimilarityMatrix to_dissimilarity(const SimilarityMatrix& s)
{
    const std::size_t m = s.size();
    DissimilarityMatrix d;
    d.annotators = s.annotators;
    d.values.assign(m * m, 0.0);
    d.imputed.assign(m * m, 0);

    CompensatedSum total;
    std::size_t valid = 0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (s.values.valid(i, j)) {
                const double v = std::clamp(1.0 - s.values.value(i, j), 0.0, 2.0);
                d.values[i * m + j] = d.values[j * m + i] = v;
                total.add(v);
                ++valid;
            }
    if (valid == 0)
        throw InputError("similarity matrix has no valid entries");

    const double fill = total.value() / static_cast<double>(valid);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (!s.values.valid(i, j)) {
                d.values[i * m + j] = d.values[j * m + i] = fill;
                d.imputed[i * m + j] = d.imputed[j * m + i] = 1;
            }
    return d;
}

namespace {

double off_diagonal_norm(const std::vector<double>& a, std::size_t n)
{
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                acc.add(a[i * n + j] * a[i * n + j]);
    return std::sqrt(acc.value());
}

} // namespace

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n, int max_sweeps,
                            double tolerance)
{
    if (a.size() != n * n)
        throw InputError("jacobi_eigen: matrix storage does not match size");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(a[i * n + j]))
                throw InputError("jacobi_eigen: non-finite entry");
            if (a[i * n + j] != a[j * n + i])
                throw InputError("jacobi_eigen: matrix is not symmetric");
        }

    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        v[i * n + i] = 1.0;

    double total = 0.0;
    for (double x : a)
        total += x * x;
    const double threshold = tolerance * std::max(1.0, std::sqrt(total));

    int sweeps = 0;
    while (off_diagonal_norm(a, n) >= threshold) {
        if (sweeps == max_sweeps)
            throw ComputeError("Jacobi eigensolver did not converge in " +
                               std::to_string(max_sweeps) + " sweeps");
        ++sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0)
                    continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = a[q * n + p] = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a[x * n + x] > a[y * n + y];
    });

    SymmetricEigen out;
    out.size = n;
    out.sweeps = sweeps;
    out.values.resize(n);
    out.vectors.assign(n * n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t src = order[c];
        out.values[c] = a[src * n + src];
        double sign = 1.0;
        for (std::size_t r = 0; r < n; ++r)
            if (std::abs(v[r * n + src]) > 1e-12) {
                sign = v[r * n + src] < 0.0 ? -1.0 : 1.0;
                break;
            }
        for (std::size_t r = 0; r < n; ++r)
            out.vectors[r * n + c] = sign * v[r * n + src];
    }
    return out;
}

Embedding2D classical_mds(const DissimilarityMatrix& d)
{
    const std::size_t n = d.size();
    if (n < 3)
        throw InputError("classical MDS needs at least 3 points, got " + std::to_string(n));

    std::vector<double> sq(n * n);
    for (std::size_t i = 0; i < n * n; ++i)
        sq[i] = d.values[i] * d.values[i];

    std::vector<double> row_mean(n);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        CompensatedSum acc;
        for (std::size_t j = 0; j < n; ++j)
            acc.add(sq[i * n + j]);
        row_mean[i] = acc.value() / static_cast<double>(n);
    }
    grand = compensated_sum(row_mean) / static_cast<double>(n);

    // B = -1/2 J D^2 J; D^2 is symmetric so row and column means coincide.
    std::vector<double> b(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = -0.5 * (sq[i * n + j] - row_mean[i] - row_mean[j] + grand);
            b[i * n + j] = b[j * n + i] = v;
        }

    const SymmetricEigen eig = jacobi_eigen(std::move(b), n);

    Embedding2D e;
    e.annotators = d.annotators;
    e.coords.assign(n, Point2{0.0, 0.0});
    // Eigenvalues this close to zero are rounding noise; taking their square
    // root would smear coincident points apart by ~1e-8.
    const double zero_tol = kJacobiTolerance * std::max(1.0, std::abs(eig.values[0]));
    for (std::size_t c = 0; c < 2; ++c) {
        double lambda = eig.values[c];
        if (std::abs(lambda) <= zero_tol) {
            lambda = 0.0;
        } else if (lambda < 0.0) {
            e.warnings.push_back("retained eigenvalue " + std::to_string(c + 1) + " (" +
                                 std::to_string(lambda) + ") is negative; floored at 0");
            lambda = 0.0;
        }
        e.eigenvalues[c] = lambda;
        const double scale = std::sqrt(lambda);
        for (std::size_t i = 0; i < n; ++i)
            e.coords[i][c] = eig.vector_component(i, c) * scale;
    }

    CompensatedSum residual, reference;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = e.coords[i][0] - e.coords[j][0];
            const double dy = e.coords[i][1] - e.coords[j][1];
            const double fitted = std::sqrt(dx * dx + dy * dy);
            const double target = d.at(i, j);
            residual.add((target - fitted) * (target - fitted));
            reference.add(target * target);
        }
    e.stress = reference.value() > 0.0 ? std::sqrt(residual.value() / reference.value()) : 0.0;
    return e;
}

namespace {

using Complex = std::complex<double>;

std::vector<Complex> centred(const std::vector<Point2>& points, Complex& mean)
{
    CompensatedSum sx, sy;
    for (const auto& p : points) {
        sx.add(p[0]);
        sy.add(p[1]);
    }
    const double count = static_cast<double>(points.size());
    mean = Complex(sx.value() / count, sy.value() / count);
    std::vector<Complex> out;
    out.reserve(points.size());
    for (const auto& p : points)
        out.emplace_back(Complex(p[0], p[1]) - mean);
    return out;
}

double squared_norm(const std::vector<Complex>& z)
{
    CompensatedSum acc;
    for (const auto& v : z)
        acc.add(std::norm(v));
    return acc.value();
}

} // namespace

ProcrustesResult procrustes_align(const std::vector<Point2>& reference,
                                  const std::vector<Point2>& target)
{
    if (reference.size() != target.size())
        throw InputError("procrustes: point counts differ (" + std::to_string(reference.size()) +
                         " vs " + std::to_string(target.size()) + ")");
    if (reference.empty())
        throw InputError("procrustes: no points");

    Complex ref_mean, tgt_mean;
    const auto r = centred(reference, ref_mean);
    const auto t = centred(target, tgt_mean);
    const double sr = squared_norm(r);
    const double st = squared_norm(t);
    if (!(st > 0.0))
        throw ComputeError("procrustes: target points are all identical");
    if (!(sr > 0.0))
        throw ComputeError("procrustes: reference points are all identical");

    // In complex form the best similarity map is t -> a*t (proper) or
    // t -> a*conj(t) (reflection), with a = sum(conj(t) r) / sum|t|^2.
    CompensatedSum pr, pi, fr, fi;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const Complex proper = std::conj(t[i]) * r[i];
        const Complex flipped = t[i] * r[i];
        pr.add(proper.real());
        pi.add(proper.imag());
        fr.add(flipped.real());
        fi.add(flipped.imag());
    }
    const Complex proper(pr.value(), pi.value());
    const Complex flipped(fr.value(), fi.value());
    const bool reflect = std::abs(flipped) > std::abs(proper);
    const Complex best = reflect ? flipped : proper;
    const Complex a = best / st;

    ProcrustesResult out;
    out.reflected = reflect;
    out.scale = std::abs(a);
    const double angle = std::arg(a);
    const double c = std::cos(angle), s = std::sin(angle);
    out.rotation = reflect ? std::array<double, 4>{c, s, s, -c} : std::array<double, 4>{c, -s, s, c};
    out.disparity = std::max(0.0, 1.0 - std::norm(best) / (st * sr));
    out.aligned.reserve(t.size());
    for (const auto& z : t) {
        const Complex mapped = a * (reflect ? std::conj(z) : z) + ref_mean;
        out.aligned.push_back({mapped.real(), mapped.imag()});
    }
    return out;
}

AgreementClusters agreement_clusters(const MaskedMatrix& s, double threshold)
{
    const std::size_t m = s.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (s.valid(i, j) && s.value(i, j) > threshold) {
                const auto a = find(i), b = find(j);
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            }

    AgreementClusters out;
    out.threshold = threshold;
    out.assignment.assign(m, -1);
    std::vector<int> id_of_root(m, -1);
    for (std::size_t i = 0; i < m; ++i) {
        const auto root = find(i);
        if (id_of_root[root] < 0)
            id_of_root[root] = out.cluster_count++;
        out.assignment[i] = id_of_root[root];
    }
    return out;
}

AgreementClusters agreement_clusters(const SimilarityMatrix& s, double threshold)
{
    return agreement_clusters(s.values, threshold);
}

} // namespace tendeval
