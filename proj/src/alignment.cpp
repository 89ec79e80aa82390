#include "tendeval/alignment.hpp"

#include "tendeval/error.hpp"

#include <algorithm>
#include <cmath>

namespace tendeval {

const char* to_string(SimilarityKind kind)
{
    switch (kind) {
    case SimilarityKind::ground_truth_kappa:
        return "ground_truth_kappa";
    case SimilarityKind::feature_cosine:
        return "feature_cosine";
    case SimilarityKind::region_cosine:
        return "region_cosine";
    }
    return "unknown";
}

SimilarityMatrix to_similarity(const ConsistencyMatrix& m)
{
    return {m.annotators, m.kappa, SimilarityKind::ground_truth_kappa};
}

SimilarityMatrix ground_truth_similarity(const AnnotationSet& ann, std::size_t tau, Exec exec)
{
    return to_similarity(consistency_matrix(ann, tau, exec));
}

namespace {

std::vector<double> mean_of_entries(const VectorTable& table, std::size_t k)
{
    const auto& entries = table.entries(k);
    const std::size_t d = table.dimension();
    std::vector<CompensatedSum> acc(d);
    for (const auto& e : entries)
        for (std::size_t i = 0; i < d; ++i)
            acc[i].add(e.values[i]);
    std::vector<double> mean(d);
    for (std::size_t i = 0; i < d; ++i)
        mean[i] = acc[i].value() / static_cast<double>(entries.size());
    return mean;
}

double norm_of(const std::vector<double>& v)
{
    CompensatedSum acc;
    for (double x : v)
        acc.add(x * x);
    return std::sqrt(acc.value());
}

} // namespace

std::vector<double> mean_representation(const VectorTable& table, const std::string& annotator)
{
    const auto k = table.annotator_index(annotator);
    if (!k)
        throw InputError("annotator '" + annotator + "' has no entries in the table");
    return mean_of_entries(table, *k);
}

SimilarityMatrix model_similarity(const VectorTable& table, Exec exec)
{
    const std::size_t m = table.annotators().size();
    if (m < 2)
        throw InputError("model similarity needs at least 2 annotators, got " + std::to_string(m));

    std::vector<std::vector<double>> means(m);
    for_each_index(exec, m, [&](std::size_t k) { means[k] = mean_of_entries(table, k); });
    for (std::size_t k = 0; k < m; ++k)
        if (!(norm_of(means[k]) > 0.0))
            throw ComputeError("mean representation of annotator '" + table.annotators()[k] +
                               "' has zero norm");

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = k + 1; l < m; ++l)
            pairs.emplace_back(k, l);
    std::vector<double> cos(pairs.size());
    for_each_index(exec, pairs.size(), [&](std::size_t p) {
        cos[p] = cosine(means[pairs[p].first], means[pairs[p].second]);
    });

    SimilarityMatrix s;
    s.annotators = table.annotators();
    s.values = MaskedMatrix(m);
    s.kind = table.kind() == VectorKind::feature ? SimilarityKind::feature_cosine
                                                 : SimilarityKind::region_cosine;
    for (std::size_t p = 0; p < pairs.size(); ++p)
        s.values.set(pairs[p].first, pairs[p].second, cos[p]);
    return s;
}

namespace {

MaskedMatrix min_max_rescaled(const MaskedMatrix& a, const MaskedMatrix& mask)
{
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t l = k + 1; l < a.size(); ++l)
            if (a.valid(k, l) && mask.valid(k, l)) {
                const double v = a.value(k, l);
                lo = first ? v : std::min(lo, v);
                hi = first ? v : std::max(hi, v);
                first = false;
            }
    if (first || !(hi > lo))
        return a;
    MaskedMatrix out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t l = k + 1; l < a.size(); ++l)
            if (a.valid(k, l))
                out.set(k, l, (a.value(k, l) - lo) / (hi - lo));
    return out;
}

} // namespace

BaeResult bae(const SimilarityMatrix& s_model, const SimilarityMatrix& s_true, bool normalize)
{
    if (s_model.annotators != s_true.annotators)
        throw InputError("BAE: model and ground-truth similarity matrices cover different "
                         "annotators");

    const MaskedMatrix& model = s_model.values;
    const MaskedMatrix& truth = s_true.values;
    StructureComparison cmp;
    if (normalize) {
        cmp = compare_structures(min_max_rescaled(truth, model), min_max_rescaled(model, truth),
                                 "ground truth", "model similarity");
    } else {
        cmp = compare_structures(truth, model, "ground truth", "model similarity");
    }
    if (!(cmp.denominator > 0.0))
        throw ComputeError("BAE: ground-truth similarity matrix has zero norm on the joint mask");

    BaeResult r;
    r.numerator = cmp.numerator;
    r.denominator = cmp.denominator;
    r.score = 1.0 - cmp.numerator / cmp.denominator;
    r.level = s_model.kind == SimilarityKind::region_cosine ? BaeLevel::region : BaeLevel::feature;
    r.pairs_used = cmp.pairs_used;
    r.normalized = normalize;
    r.excluded_pairs = cmp.excluded;
    return r;
}

double importance_correlation(const VectorTable& a, const VectorTable& b)
{
    if (a.dimension() != b.dimension())
        throw InputError("importance vectors differ in dimension (" +
                         std::to_string(a.dimension()) + " vs " + std::to_string(b.dimension()) +
                         ")");
    if (a.annotators() != b.annotators() || a.samples() != b.samples() ||
        a.entry_count() != b.entry_count())
        throw InputError("importance tables have different (annotator, sample) keys");

    CompensatedSum total;
    std::size_t n = 0;
    for (std::size_t k = 0; k < a.annotators().size(); ++k) {
        const auto& ea = a.entries(k);
        const auto& eb = b.entries(k);
        if (ea.size() != eb.size())
            throw InputError("importance tables have different keys for annotator '" +
                             a.annotators()[k] + "'");
        for (std::size_t i = 0; i < ea.size(); ++i) {
            if (ea[i].sample != eb[i].sample)
                throw InputError("importance tables have different keys for annotator '" +
                                 a.annotators()[k] + "'");
            try {
                total.add(pearson(ea[i].values, eb[i].values));
            } catch (const ComputeError&) {
                throw ComputeError("constant importance vector at (annotator '" +
                                   a.annotators()[k] + "', sample '" +
                                   a.samples()[ea[i].sample] + "')");
            }
            ++n;
        }
    }
    return total.value() / static_cast<double>(n);
}

double mean_pairwise_cosine(const VectorTable& table)
{
    const auto s = model_similarity(table);
    CompensatedSum total;
    std::size_t n = 0;
    for (std::size_t k = 0; k < s.size(); ++k)
        for (std::size_t l = k + 1; l < s.size(); ++l) {
            total.add(s.values.value(k, l));
            ++n;
        }
    return total.value() / static_cast<double>(n);
}

std::vector<double> per_annotator_accuracy(const AnnotationSet& gold, const AnnotationSet& pred)
{
    if (!gold.same_keys(pred))
        throw InputError("predictions and annotations have different (annotator, sample) keys");
    std::vector<double> out(gold.annotator_count());
    for (std::size_t k = 0; k < gold.annotator_count(); ++k) {
        std::vector<Label> g, p;
        for (const auto& e : gold.entries(k))
            g.push_back(e.label);
        for (const auto& e : pred.entries(k))
            p.push_back(e.label);
        out[k] = accuracy(p, g);
    }
    return out;
}

CompResult comprehensiveness_from_accuracies(double acc_original, double acc_masked_topk,
                                             double acc_masked_random)
{
    CompResult r;
    r.acc_original = acc_original;
    r.acc_masked_topk = acc_masked_topk;
    r.acc_masked_random = acc_masked_random;
    r.comp = acc_original - acc_masked_topk;
    r.delta_vs_random = acc_masked_random - acc_masked_topk;
    return r;
}

CompResult comprehensiveness(const AnnotationSet& gold, const AnnotationSet& pred_original,
                             const AnnotationSet& pred_masked_topk,
                             const AnnotationSet& pred_masked_random)
{
    auto mean_acc = [&](const AnnotationSet& pred) {
        const auto acc = per_annotator_accuracy(gold, pred);
        return compensated_sum(acc) / static_cast<double>(acc.size());
    };
    return comprehensiveness_from_accuracies(mean_acc(pred_original), mean_acc(pred_masked_topk),
                                             mean_acc(pred_masked_random));
}

} // namespace tendeval
