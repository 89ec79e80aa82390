#pragma once

#include "tendeval/alignment.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace tendeval {

using Point2 = std::array<double, 2>;

/// d_ij = 1 - s_ij for valid pairs; invalid pairs are imputed with the mean
/// valid dissimilarity and flagged.
struct DissimilarityMatrix {
    std::vector<std::string> annotators;
    std::vector<double> values;  // size x size, zero diagonal
    std::vector<char> imputed;   // size x size
    std::size_t size() const { return annotators.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
    std::size_t imputed_pair_count() const;
};

DissimilarityMatrix to_dissimilarity(const SimilarityMatrix& s);

/// Eigen-decomposition of a dense symmetric matrix by cyclic Jacobi
/// rotations. Eigenvalues are sorted in descending order; eigenvector c is
/// column c of the row-major `vectors`, with its first non-zero component
/// positive.
struct SymmetricEigen {
    std::size_t size = 0;
    std::vector<double> values;
    std::vector<double> vectors;
    int sweeps = 0;

    double vector_component(std::size_t row, std::size_t column) const
    {
        return vectors[row * size + column];
    }
};

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiTolerance = 1e-12;

/// Throws ComputeError when the off-diagonal mass has not dropped below
/// tolerance * max(1, ||A||_F) after `max_sweeps` sweeps.
SymmetricEigen jacobi_eigen(std::vector<double> matrix, std::size_t n,
                            int max_sweeps = kJacobiMaxSweeps,
                            double tolerance = kJacobiTolerance);

struct Embedding2D {
    std::vector<std::string> annotators;
    std::vector<Point2> coords;
    std::array<double, 2> eigenvalues{};
    double stress = 0.0; // Kruskal stress-1 against the input dissimilarities
    std::vector<std::string> warnings;
};

/// Torgerson scaling: double-centre -1/2 J D^2 J and keep the top two
/// eigenpairs. Negative retained eigenvalues are floored at 0 with a
/// warning.
Embedding2D classical_mds(const DissimilarityMatrix& d);

struct ProcrustesResult {
    std::vector<Point2> aligned; // target mapped into the reference frame
    double disparity = 0.0;      // residual after unit-norm standardization
    double scale = 1.0;
    std::array<double, 4> rotation{1.0, 0.0, 0.0, 1.0}; // row-major 2x2, det = +-1
    bool reflected = false;
};

/// Similarity transform (translation, rotation or reflection, uniform
/// scale) of `target` minimizing the squared residual to `reference`.
ProcrustesResult procrustes_align(const std::vector<Point2>& reference,
                                  const std::vector<Point2>& target);

struct AgreementClusters {
    double threshold = 0.6;
    std::vector<int> assignment; // cluster id per annotator, numbered by first member
    int cluster_count = 0;
};

inline constexpr double kDefaultClusterThreshold = 0.6;

/// Connected components over edges with a valid entry strictly above
/// `threshold`.
AgreementClusters agreement_clusters(const MaskedMatrix& s, double threshold);
AgreementClusters agreement_clusters(const SimilarityMatrix& s, double threshold);

} // namespace tendeval
