#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tendeval {

using Label = int;

/// Explicit set of permitted categorical labels, kept sorted and unique.
class LabelDomain {
public:
    LabelDomain() = default;
    explicit LabelDomain(std::vector<Label> labels);

    /// Domain {0, 1, ..., count-1}.
    static LabelDomain range(int count);

    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    bool contains(Label label) const { return index_of(label).has_value(); }
    std::optional<std::size_t> index_of(Label label) const;
    const std::vector<Label>& labels() const { return labels_; }

    bool operator==(const LabelDomain&) const = default;

private:
    std::vector<Label> labels_;
};

/// Neumaier-compensated accumulator. Used for every reduction so that the
/// serial and parallel paths, which add terms in the same fixed order,
/// produce identical bits.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

double compensated_sum(std::span<const double> values);

struct KappaResult {
    double value = 0.0;
    double observed = 0.0; // p_o
    double expected = 0.0; // p_e
    bool degenerate = false; // p_e within 1e-12 of 1
};

/// Unweighted Cohen's kappa from the pairwise contingency table.
/// When p_e >= 1 - 1e-12 (both raters constant) the result is 1 if the two
/// constants agree and 0 otherwise, with `degenerate` set.
KappaResult cohen_kappa_detail(std::span<const Label> a, std::span<const Label> b,
                               const LabelDomain& domain);
double cohen_kappa(std::span<const Label> a, std::span<const Label> b,
                   const LabelDomain& domain);

/// Fleiss' kappa generalized to a varying number of raters per item.
/// counts[i][j] is the number of raters assigning item i to category j.
double fleiss_kappa(std::span<const std::vector<int>> counts);

double pearson(std::span<const double> x, std::span<const double> y);

double accuracy(std::span<const Label> pred, std::span<const Label> gold);

/// Cosine similarity clamped to [-1, 1].
double cosine(std::span<const double> u, std::span<const double> v);

/// Square M x M matrix of reals with a symmetric validity mask. The diagonal
/// is never valid.
class MaskedMatrix {
public:
    MaskedMatrix() = default;
    explicit MaskedMatrix(std::size_t size);

    std::size_t size() const { return size_; }

    double value(std::size_t i, std::size_t j) const { return values_[i * size_ + j]; }
    bool valid(std::size_t i, std::size_t j) const { return valid_[i * size_ + j] != 0; }

    /// Sets (i,j) and (j,i) and marks both valid. i must differ from j.
    void set(std::size_t i, std::size_t j, double v);
    /// Clears validity of (i,j) and (j,i); the stored value becomes 0.
    void invalidate(std::size_t i, std::size_t j);

    std::size_t valid_pair_count() const;

    bool operator==(const MaskedMatrix&) const = default;

private:
    std::size_t size_ = 0;
    std::vector<double> values_;
    std::vector<char> valid_;
};

/// Frobenius norm of a over its valid off-diagonal cells.
double masked_frobenius(const MaskedMatrix& a);
/// Frobenius norm of a - b over cells valid in both.
double masked_frobenius(const MaskedMatrix& a, const MaskedMatrix& b);

} // namespace tendeval
