#pragma once

#include "tendeval/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tendeval {

/// Synthetic multi-annotator corpus with planted tendency clusters.
struct SynthConfig {
    int annotators = 12;
    int samples = 500;
    int clusters = 3;
    int labels = 5;
    double annotator_noise = 0.15; // rho: per-label flip probability of annotators
    double model_noise = 0.1;      // rho': flip probability applied to predictions
    int feature_dim = 64;
    double feature_noise = 0.3;    // sigma
    int regions = 16;
    double coverage = 0.8;         // fraction of samples each annotator labels
    /// Probability that a cluster's latent label copies the shared per-sample
    /// base label instead of drawing its own. 0 gives independent clusters.
    double cluster_coupling = 0.9;
    std::uint64_t seed = 7;

    /// Throws InputError describing the first violated constraint.
    void validate() const;
};

struct SynthTruth {
    std::vector<int> cluster_of;                 // per annotator
    std::vector<Label> base_labels;              // per sample
    std::vector<std::vector<Label>> cluster_labels; // [cluster][sample]
};

struct SynthCorpus {
    SynthConfig config;
    AnnotationSet annotations;
    AnnotationSet predictions;
    FeatureTable features;
    AttentionTable attentions;
    SynthTruth truth;
};

/// Per-annotator "copy" strength: the probability mass an annotator's label
/// carries from its cluster latent once uniform flips are factored out.
double label_fidelity(int labels, double flip_probability);

SynthCorpus gen_corpus(const SynthConfig& cfg);

/// Writes annotations.jsonl, predictions.jsonl, features.jsonl,
/// attentions.jsonl and truth.json into `dir` (created if missing).
void save_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

std::string synth_annotator_id(int index, int count);
std::string synth_sample_id(int index, int count);

// Ablation baselines.

/// Same key set, labels i.i.d. uniform over the domain.
AnnotationSet baseline_random_labels(const AnnotationSet& ann, std::uint64_t seed);
/// Per-sample majority label (ties toward the smallest label) given to
/// every annotator of that sample.
AnnotationSet baseline_consensus_labels(const AnnotationSet& ann);
/// One identical unit vector per annotator.
FeatureTable baseline_uniform_features(const std::vector<std::string>& annotators, int dim);
/// One i.i.d. standard normal vector per annotator.
FeatureTable baseline_random_features(const std::vector<std::string>& annotators, int dim,
                                      std::uint64_t seed);

/// Re-derives predictions from `ann` by flipping each label to a uniformly
/// chosen different label with probability `flip_probability`.
AnnotationSet flip_labels(const AnnotationSet& ann, double flip_probability, std::uint64_t seed,
                          const std::string& stream);

} // namespace tendeval
