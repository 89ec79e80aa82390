#include "tendeval/stats.hpp"

#include "tendeval/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace tendeval {

LabelDomain::LabelDomain(std::vector<Label> labels) : labels_(std::move(labels))
{
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

LabelDomain LabelDomain::range(int count)
{
    std::vector<Label> labels(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i)
        labels[static_cast<std::size_t>(i)] = i;
    return LabelDomain(std::move(labels));
}

std::optional<std::size_t> LabelDomain::index_of(Label label) const
{
    const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label)
        return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

void CompensatedSum::add(double x)
{
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        carry_ += (sum_ - t) + x;
    else
        carry_ += (x - t) + sum_;
    sum_ = t;
}

double compensated_sum(std::span<const double> values)
{
    CompensatedSum acc;
    for (double v : values)
        acc.add(v);
    return acc.value();
}

namespace {

std::vector<std::size_t> to_indices(std::span<const Label> seq, const LabelDomain& domain,
                                    const char* which)
{
    std::vector<std::size_t> out;
    out.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto idx = domain.index_of(seq[i]);
        if (!idx)
            throw InputError(std::string("label ") + std::to_string(seq[i]) + " at position " +
                             std::to_string(i) + " of " + which + " is outside the label domain");
        out.push_back(*idx);
    }
    return out;
}

} // namespace

KappaResult cohen_kappa_detail(std::span<const Label> a, std::span<const Label> b,
                               const LabelDomain& domain)
{
    if (a.size() != b.size())
        throw InputError("cohen_kappa: sequence lengths differ (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
    if (a.empty())
        throw InputError("cohen_kappa: empty sequences");

    const auto ia = to_indices(a, domain, "first sequence");
    const auto ib = to_indices(b, domain, "second sequence");

    const std::size_t c = domain.size();
    std::vector<std::int64_t> rows(c, 0), cols(c, 0);
    std::int64_t agree = 0;
    for (std::size_t i = 0; i < ia.size(); ++i) {
        ++rows[ia[i]];
        ++cols[ib[i]];
        if (ia[i] == ib[i])
            ++agree;
    }
    const auto n = static_cast<std::int64_t>(a.size());
    std::int64_t chance = 0; // sum_j rows_j * cols_j = n^2 * p_e
    for (std::size_t j = 0; j < c; ++j)
        chance += rows[j] * cols[j];

    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    KappaResult r;
    r.observed = static_cast<double>(agree) / static_cast<double>(n);
    r.expected = static_cast<double>(chance) / n2;

    if (r.expected >= 1.0 - 1e-12) {
        r.degenerate = true;
        r.value = (ia.front() == ib.front()) ? 1.0 : 0.0;
        return r;
    }
    // (p_o - p_e) / (1 - p_e) with both terms scaled by n^2; numerator and
    // denominator are exact integers below 2^53 for any realistic n.
    const double num = static_cast<double>(n * agree - chance);
    const double den = n2 - static_cast<double>(chance);
    r.value = std::clamp(num / den, -1.0, 1.0);
    return r;
}

double cohen_kappa(std::span<const Label> a, std::span<const Label> b, const LabelDomain& domain)
{
    return cohen_kappa_detail(a, b, domain).value;
}

double fleiss_kappa(std::span<const std::vector<int>> counts)
{
    if (counts.empty())
        throw InputError("fleiss_kappa: no items");
    const std::size_t categories = counts.front().size();
    if (categories == 0)
        throw InputError("fleiss_kappa: no categories");

    std::vector<std::int64_t> category_totals(categories, 0);
    std::int64_t rater_total = 0;
    CompensatedSum agreement;
    bool unanimous = true;

    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto& row = counts[i];
        if (row.size() != categories)
            throw InputError("fleiss_kappa: item " + std::to_string(i) + " has " +
                             std::to_string(row.size()) + " categories, expected " +
                             std::to_string(categories));
        std::int64_t n_i = 0, pairs = 0, nonzero = 0;
        for (std::size_t j = 0; j < categories; ++j) {
            if (row[j] < 0)
                throw InputError("fleiss_kappa: negative count at item " + std::to_string(i));
            const std::int64_t v = row[j];
            n_i += v;
            pairs += v * (v - 1);
            category_totals[j] += v;
            if (v > 0)
                ++nonzero;
        }
        if (n_i < 2)
            throw InputError("fleiss_kappa: item " + std::to_string(i) + " has " +
                             std::to_string(n_i) + " raters, need at least 2");
        if (nonzero > 1)
            unanimous = false;
        rater_total += n_i;
        agreement.add(static_cast<double>(pairs) / static_cast<double>(n_i * (n_i - 1)));
    }
    if (unanimous)
        return 1.0;

    const double p_bar = agreement.value() / static_cast<double>(counts.size());
    CompensatedSum chance;
    for (std::size_t j = 0; j < categories; ++j) {
        const double p_j = static_cast<double>(category_totals[j]) / static_cast<double>(rater_total);
        chance.add(p_j * p_j);
    }
    const double p_e = chance.value();
    if (p_e >= 1.0 - 1e-12)
        return 1.0;
    return (p_bar - p_e) / (1.0 - p_e);
}

namespace {

double mean_of(std::span<const double> x)
{
    return compensated_sum(x) / static_cast<double>(x.size());
}

bool is_constant(std::span<const double> x)
{
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

void require_finite(std::span<const double> x, const char* what)
{
    for (double v : x)
        if (!std::isfinite(v))
            throw InputError(std::string(what) + ": non-finite entry");
}

} // namespace

double pearson(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw InputError("pearson: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    if (x.size() < 2)
        throw InputError("pearson: need at least 2 values");
    require_finite(x, "pearson");
    require_finite(y, "pearson");
    if (is_constant(x) || is_constant(y))
        throw ComputeError("pearson: constant vector has zero variance");

    const double mx = mean_of(x);
    const double my = mean_of(y);
    CompensatedSum sxy, sxx, syy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy.add(dx * dy);
        sxx.add(dx * dx);
        syy.add(dy * dy);
    }
    const double den = std::sqrt(sxx.value()) * std::sqrt(syy.value());
    if (!(den > 0.0))
        throw ComputeError("pearson: zero variance");
    return std::clamp(sxy.value() / den, -1.0, 1.0);
}

double accuracy(std::span<const Label> pred, std::span<const Label> gold)
{
    if (pred.size() != gold.size())
        throw InputError("accuracy: length mismatch (" + std::to_string(pred.size()) + " vs " +
                         std::to_string(gold.size()) + ")");
    if (pred.empty())
        throw InputError("accuracy: empty sequences");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == gold[i])
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

double cosine(std::span<const double> u, std::span<const double> v)
{
    if (u.size() != v.size())
        throw InputError("cosine: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()) + ")");
    if (u.empty())
        throw InputError("cosine: empty vectors");
    require_finite(u, "cosine");
    require_finite(v, "cosine");
    CompensatedSum dot, uu, vv;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot.add(u[i] * v[i]);
        uu.add(u[i] * u[i]);
        vv.add(v[i] * v[i]);
    }
    const double nu = std::sqrt(uu.value());
    const double nv = std::sqrt(vv.value());
    if (!(nu > 0.0) || !(nv > 0.0))
        throw ComputeError("cosine: zero-norm vector");
    return std::clamp(dot.value() / (nu * nv), -1.0, 1.0);
}

MaskedMatrix::MaskedMatrix(std::size_t size)
    : size_(size), values_(size * size, 0.0), valid_(size * size, 0)
{
}

void MaskedMatrix::set(std::size_t i, std::size_t j, double v)
{
    if (i >= size_ || j >= size_)
        throw InputError("MaskedMatrix::set: index out of range");
    if (i == j)
        throw InputError("MaskedMatrix::set: diagonal cells are never valid");
    if (!std::isfinite(v))
        throw InputError("MaskedMatrix::set: non-finite value");
    values_[i * size_ + j] = v;
    values_[j * size_ + i] = v;
    valid_[i * size_ + j] = 1;
    valid_[j * size_ + i] = 1;
}

void MaskedMatrix::invalidate(std::size_t i, std::size_t j)
{
    if (i >= size_ || j >= size_)
        throw InputError("MaskedMatrix::invalidate: index out of range");
    values_[i * size_ + j] = 0.0;
    values_[j * size_ + i] = 0.0;
    valid_[i * size_ + j] = 0;
    valid_[j * size_ + i] = 0;
}

std::size_t MaskedMatrix::valid_pair_count() const
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < size_; ++i)
        for (std::size_t j = i + 1; j < size_; ++j)
            if (valid(i, j))
                ++n;
    return n;
}

double masked_frobenius(const MaskedMatrix& a)
{
    CompensatedSum acc;
    std::size_t cells = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (i != j && a.valid(i, j)) {
                acc.add(a.value(i, j) * a.value(i, j));
                ++cells;
            }
    if (cells == 0)
        throw InputError("masked_frobenius: empty mask");
    return std::sqrt(acc.value());
}

double masked_frobenius(const MaskedMatrix& a, const MaskedMatrix& b)
{
    if (a.size() != b.size())
        throw InputError("masked_frobenius: size mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    CompensatedSum acc;
    std::size_t cells = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (i != j && a.valid(i, j) && b.valid(i, j)) {
                const double d = a.value(i, j) - b.value(i, j);
                acc.add(d * d);
                ++cells;
            }
    if (cells == 0)
        throw InputError("masked_frobenius: empty joint mask");
    return std::sqrt(acc.value());
}

} // namespace tendeval
