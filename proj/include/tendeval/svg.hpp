#pragma once

#include "tendeval/mds.hpp"
#include "tendeval/stats.hpp"

#include <string>
#include <vector>

namespace tendeval {

/// Heatmap. Values map linearly over [0, 1] onto a sequential
/// blue palette; negatives are drawn at the 0 colour with a hatch and keep
/// their true value in the cell tooltip. Invalid cells are gray.
std::string heatmap_svg(const MaskedMatrix& m, const std::vector<std::string>& labels,
                        const std::string& title);

/// Scatter plot. Points are coloured by cluster id; coincident points
/// are offset by a jitter derived from the annotator id.
std::string scatter_svg(const Embedding2D& e, const AgreementClusters& clusters,
                        const std::string& title);

/// Sequential palette colour for v in [0, 1] as "#rrggbb".
std::string sequential_color(double v);

} // namespace tendeval
