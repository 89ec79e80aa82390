#pragma once

#include "tendeval/consistency.hpp"
#include "tendeval/dataset.hpp"
#include "tendeval/parallel.hpp"
#include "tendeval/stats.hpp"

#include <string>
#include <vector>

namespace tendeval {

enum class SimilarityKind { ground_truth_kappa, feature_cosine, region_cosine };

const char* to_string(SimilarityKind kind);

struct SimilarityMatrix {
    std::vector<std::string> annotators;
    MaskedMatrix values;
    SimilarityKind kind = SimilarityKind::ground_truth_kappa;

    std::size_t size() const { return annotators.size(); }
};

/// S^true: the consistency matrix of the annotations, relabelled.
SimilarityMatrix ground_truth_similarity(const AnnotationSet& ann, std::size_t tau,
                                         Exec exec = Exec::parallel);
SimilarityMatrix to_similarity(const ConsistencyMatrix& m);

/// Componentwise mean of one annotator's vectors.
std::vector<double> mean_representation(const VectorTable& table, const std::string& annotator);

/// Cosine of per-annotator mean vectors for every off-diagonal pair.
/// Kind is feature_cosine or region_cosine according to the table.
SimilarityMatrix model_similarity(const VectorTable& table, Exec exec = Exec::parallel);

enum class BaeLevel { feature, region };

struct BaeResult {
    double score = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    BaeLevel level = BaeLevel::feature;
    std::size_t pairs_used = 0;
    bool normalized = false;
    std::vector<ExcludedPair> excluded_pairs;
};

/// 1 - ||S_model - S_true|| / ||S_true|| over the joint off-diagonal mask.
/// With `normalize`, each matrix is first min-max rescaled to [0, 1] over
/// the joint mask; a matrix that is constant on the mask is left unchanged.
BaeResult bae(const SimilarityMatrix& s_model, const SimilarityMatrix& s_true,
              bool normalize = false);

/// Mean over shared (annotator, sample) keys of the Pearson correlation
/// between paired importance vectors.
double importance_correlation(const VectorTable& a, const VectorTable& b);

/// Mean of the off-diagonal entries of model_similarity(table).
double mean_pairwise_cosine(const VectorTable& table);

struct CompResult {
    double acc_original = 0.0;
    double acc_masked_topk = 0.0;
    double acc_masked_random = 0.0;
    double comp = 0.0;
    double delta_vs_random = 0.0;
};

CompResult comprehensiveness_from_accuracies(double acc_original, double acc_masked_topk,
                                             double acc_masked_random);

/// Accuracies are computed per annotator and averaged uniformly over
/// annotators before differencing.
CompResult comprehensiveness(const AnnotationSet& gold, const AnnotationSet& pred_original,
                             const AnnotationSet& pred_masked_topk,
                             const AnnotationSet& pred_masked_random);

/// Per-annotator accuracy of `pred` against `gold` on identical keys.
std::vector<double> per_annotator_accuracy(const AnnotationSet& gold, const AnnotationSet& pred);

} // namespace tendeval
