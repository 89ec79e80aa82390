#include "tendeval/consistency.hpp"

#include "tendeval/error.hpp"

namespace tendeval {

ConsistencyMatrix consistency_matrix(const AnnotationSet& ann, std::size_t tau, Exec exec)
{
    if (tau < 2)
        throw InputError("min-overlap must be at least 2, got " + std::to_string(tau));
    const std::size_t m = ann.annotator_count();
    if (m < 2)
        throw InputError("need at least 2 annotators, got " + std::to_string(m));

    const OverlapIndex overlap = overlap_index(ann, exec);

    ConsistencyMatrix out;
    out.annotators = ann.annotators();
    out.kappa = MaskedMatrix(m);
    out.tau = tau;
    out.pair_overlaps = overlap.counts;

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = k + 1; l < m; ++l)
            pairs.emplace_back(k, l);

    std::vector<KappaResult> results(pairs.size());
    std::vector<char> computed(pairs.size(), 0);

    for_each_index(exec, pairs.size(), [&](std::size_t p) {
        const auto [k, l] = pairs[p];
        const auto& shared = overlap.pair_samples[p];
        if (shared.size() < tau)
            return;
        // Restrictions Y_k|S_kl and Y_l|S_kl in ascending sample order.
        std::vector<Label> a, b;
        a.reserve(shared.size());
        b.reserve(shared.size());
        const auto& ek = ann.entries(k);
        const auto& el = ann.entries(l);
        std::size_t i = 0, j = 0;
        for (std::size_t s : shared) {
            while (ek[i].sample != s)
                ++i;
            while (el[j].sample != s)
                ++j;
            a.push_back(ek[i].label);
            b.push_back(el[j].label);
        }
        results[p] = cohen_kappa_detail(a, b, ann.domain());
        computed[p] = 1;
    });

    for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (!computed[p])
            continue;
        const auto [k, l] = pairs[p];
        out.kappa.set(k, l, results[p].value);
        if (results[p].degenerate)
            out.degenerate_pairs.emplace_back(k, l);
    }
    if (out.kappa.valid_pair_count() == 0)
        throw ComputeError("no annotator pair shares at least " + std::to_string(tau) +
                           " samples");
    return out;
}

StructureComparison compare_structures(const MaskedMatrix& reference,
                                       const MaskedMatrix& candidate,
                                       const char* reference_name, const char* candidate_name)
{
    if (reference.size() != candidate.size())
        throw InputError("matrix size mismatch (" + std::to_string(reference.size()) + " vs " +
                         std::to_string(candidate.size()) + ")");
    StructureComparison cmp;
    const std::size_t m = reference.size();
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = k + 1; l < m; ++l) {
            const bool in_ref = reference.valid(k, l);
            const bool in_cand = candidate.valid(k, l);
            if (in_ref && in_cand) {
                ++cmp.pairs_used;
            } else if (in_ref || in_cand) {
                cmp.excluded.push_back(
                    {k, l, std::string("invalid in ") + (in_ref ? candidate_name : reference_name)});
            } else {
                cmp.excluded.push_back({k, l, "invalid in both"});
            }
        }
    if (cmp.pairs_used == 0)
        throw ComputeError(std::string("no pair is valid in both ") + reference_name + " and " +
                           candidate_name);

    // Reference restricted to the joint mask.
    MaskedMatrix joint(m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = k + 1; l < m; ++l)
            if (reference.valid(k, l) && candidate.valid(k, l))
                joint.set(k, l, reference.value(k, l));

    cmp.denominator = masked_frobenius(joint);
    cmp.numerator = masked_frobenius(joint, candidate);
    return cmp;
}

DicResult dic(const ConsistencyMatrix& m_true, const ConsistencyMatrix& m_pred)
{
    if (m_true.annotators != m_pred.annotators)
        throw InputError("DIC: ground-truth and predicted matrices cover different annotators");
    if (m_true.tau != m_pred.tau)
        throw InputError("DIC: matrices were built with different min-overlap values");

    const auto cmp = compare_structures(m_true.kappa, m_pred.kappa, "ground truth", "predictions");
    if (!(cmp.denominator > 0.0))
        throw ComputeError("DIC: ground-truth consistency matrix has zero norm on the joint mask");

    DicResult r;
    r.numerator = cmp.numerator;
    r.denominator = cmp.denominator;
    r.score = cmp.numerator / cmp.denominator;
    r.pairs_used = cmp.pairs_used;
    r.excluded_pairs = cmp.excluded;
    return r;
}

} // namespace tendeval
