#pragma once

#include "tendeval/dataset.hpp"
#include "tendeval/parallel.hpp"
#include "tendeval/stats.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tendeval {

inline constexpr std::size_t kDefaultMinOverlap = 10;

/// Pairwise Cohen's kappa over shared samples. Entry (k,l) is valid iff
/// |S_kl| >= tau.
struct ConsistencyMatrix {
    std::vector<std::string> annotators;
    MaskedMatrix kappa;
    std::size_t tau = kDefaultMinOverlap;
    std::vector<std::size_t> pair_overlaps; // size x size, |S_kl| per pair
    /// Pairs whose kappa hit the constant-rater rule, as (k, l) with k < l.
    std::vector<std::pair<std::size_t, std::size_t>> degenerate_pairs;

    std::size_t size() const { return annotators.size(); }
    std::size_t overlap(std::size_t k, std::size_t l) const
    {
        return pair_overlaps[k * annotators.size() + l];
    }
};

/// Builds M (or M' when given predictions) from one annotation set.
/// Throws ComputeError when no pair reaches tau.
ConsistencyMatrix consistency_matrix(const AnnotationSet& ann, std::size_t tau,
                                     Exec exec = Exec::parallel);

struct ExcludedPair {
    std::size_t k = 0;
    std::size_t l = 0;
    std::string reason;
};

/// Masked comparison of a candidate structure against a reference over
/// the cells valid in both. Shared by DIC and BAE.
struct StructureComparison {
    double numerator = 0.0;   // ||reference - candidate|| over the joint mask
    double denominator = 0.0; // ||reference|| over the joint mask
    std::size_t pairs_used = 0;
    std::vector<ExcludedPair> excluded;
};

StructureComparison compare_structures(const MaskedMatrix& reference,
                                       const MaskedMatrix& candidate,
                                       const char* reference_name, const char* candidate_name);

struct DicResult {
    double score = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    std::size_t pairs_used = 0;
    std::vector<ExcludedPair> excluded_pairs;
};

/// ||M - M'|| / ||M|| over the joint off-diagonal mask. Lower is better.
DicResult dic(const ConsistencyMatrix& m_true, const ConsistencyMatrix& m_pred);

} // namespace tendeval
