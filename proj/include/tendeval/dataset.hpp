#pragma once

#include "tendeval/parallel.hpp"
#include "tendeval/stats.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tendeval {

struct AnnotationRecord {
    std::string sample_id;
    std::string annotator_id;
    Label label = 0;

    bool operator==(const AnnotationRecord&) const = default;
};

/// Sparse (annotator, sample) -> label map. Annotators and samples are
/// indexed in lexicographic id order; each annotator's labels are stored
/// sorted by sample index.
class AnnotationSet {
public:
    struct Entry {
        std::size_t sample = 0;
        Label label = 0;
        bool operator==(const Entry&) const = default;
    };

    AnnotationSet() = default;

    /// Validates and indexes records. Rejects duplicate pairs and labels
    /// outside the domain.
    static AnnotationSet from_records(const std::vector<AnnotationRecord>& records,
                                      LabelDomain domain);
    /// Same, with the domain inferred from the labels present.
    static AnnotationSet from_records_inferred(const std::vector<AnnotationRecord>& records);

    const std::vector<std::string>& annotators() const { return annotators_; }
    const std::vector<std::string>& samples() const { return samples_; }
    const LabelDomain& domain() const { return domain_; }

    std::size_t annotator_count() const { return annotators_.size(); }
    std::size_t label_count() const;
    std::optional<std::size_t> annotator_index(const std::string& id) const;
    std::optional<std::size_t> sample_index(const std::string& id) const;

    /// Labels of annotator k, sorted by sample index.
    const std::vector<Entry>& entries(std::size_t annotator) const { return entries_[annotator]; }
    std::optional<Label> label(std::size_t annotator, std::size_t sample) const;

    /// Records in canonical order (annotator, then sample).
    std::vector<AnnotationRecord> records() const;

    bool same_keys(const AnnotationSet& other) const;

    bool operator==(const AnnotationSet&) const = default;

private:
    std::vector<std::string> annotators_;
    std::vector<std::string> samples_;
    LabelDomain domain_;
    std::vector<std::vector<Entry>> entries_;
};

/// Keeps only the (annotator, sample) keys of `source` that also exist in
/// `reference`. The label domain of `source` is preserved.
AnnotationSet restrict_to(const AnnotationSet& source, const AnnotationSet& reference);

enum class VectorKind { feature, attention };

struct VectorRecord {
    std::string sample_id;
    std::string annotator_id;
    std::vector<double> values;

    bool operator==(const VectorRecord&) const = default;
};

/// Per-(annotator, sample) real vectors sharing one dimension. Used for
/// learned features, importance vectors and attention-over-region weights.
/// Attention tables hold non-negative weights renormalized to unit sum.
class VectorTable {
public:
    struct Entry {
        std::size_t sample = 0;
        std::vector<double> values;
        bool operator==(const Entry&) const = default;
    };

    VectorTable() = default;

    static VectorTable features(const std::vector<VectorRecord>& records);
    static VectorTable attentions(const std::vector<VectorRecord>& records);

    VectorKind kind() const { return kind_; }
    std::size_t dimension() const { return dimension_; }
    const std::vector<std::string>& annotators() const { return annotators_; }
    const std::vector<std::string>& samples() const { return samples_; }
    std::optional<std::size_t> annotator_index(const std::string& id) const;
    const std::vector<Entry>& entries(std::size_t annotator) const { return entries_[annotator]; }
    std::size_t entry_count() const;

    std::vector<VectorRecord> records() const;

    bool operator==(const VectorTable&) const = default;

private:
    static VectorTable build(const std::vector<VectorRecord>& records, VectorKind kind);

    VectorKind kind_ = VectorKind::feature;
    std::size_t dimension_ = 0;
    std::vector<std::string> annotators_;
    std::vector<std::string> samples_;
    std::vector<std::vector<Entry>> entries_;
};

using FeatureTable = VectorTable;
using AttentionTable = VectorTable;

/// Pairwise shared-sample structure S_kl = S_k ∩ S_l.
struct OverlapIndex {
    std::size_t size = 0;
    std::vector<std::size_t> counts; // size x size, row-major; diagonal = |S_k|

    std::size_t count(std::size_t k, std::size_t l) const { return counts[k * size + l]; }
    /// Shared sample indices (ascending) for k < l.
    const std::vector<std::size_t>& shared(std::size_t k, std::size_t l) const;

    std::vector<std::vector<std::size_t>> pair_samples; // upper-triangle pairs, row-major

    bool operator==(const OverlapIndex&) const = default;
};

std::size_t pair_slot(std::size_t size, std::size_t k, std::size_t l);

OverlapIndex overlap_index(const AnnotationSet& ann, Exec exec = Exec::parallel);

// JSON-lines I/O. Parse errors carry the 1-based line number.
AnnotationSet load_annotations(const std::filesystem::path& path,
                               const std::optional<LabelDomain>& domain);
void save_annotations(const std::filesystem::path& path, const AnnotationSet& ann);

FeatureTable load_features(const std::filesystem::path& path);
AttentionTable load_attentions(const std::filesystem::path& path);
void save_vectors(const std::filesystem::path& path, const VectorTable& table);

} // namespace tendeval
