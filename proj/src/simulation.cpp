#include "tendeval/simulation.hpp"

#include "tendeval/error.hpp"
#include "tendeval/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace tendeval {

void SynthConfig::validate() const
{
    auto fail = [](const std::string& what) { throw InputError("synth config: " + what); };
    if (annotators < 2)
        fail("annotators must be >= 2");
    if (samples < 1)
        fail("samples must be >= 1");
    if (clusters < 1 || clusters > annotators)
        fail("clusters must be in [1, annotators]");
    if (labels < 2)
        fail("labels must be >= 2");
    if (!(annotator_noise >= 0.0 && annotator_noise <= 1.0))
        fail("noise must be in [0, 1]");
    if (!(model_noise >= 0.0 && model_noise <= 1.0))
        fail("model-noise must be in [0, 1]");
    if (!(feature_noise >= 0.0) || !std::isfinite(feature_noise))
        fail("feature-noise must be >= 0");
    if (feature_dim < 1 + clusters + annotators)
        fail("feature-dim must be >= 1 + clusters + annotators (" +
             std::to_string(1 + clusters + annotators) + ")");
    if (regions < 1)
        fail("regions must be >= 1");
    if (!(coverage > 0.0 && coverage <= 1.0))
        fail("coverage must be in (0, 1]");
    if (!(cluster_coupling >= 0.0 && cluster_coupling <= 1.0))
        fail("cluster-coupling must be in [0, 1]");
}

namespace {

int digits(int n)
{
    int d = 1;
    while (n >= 10) {
        n /= 10;
        ++d;
    }
    return d;
}

std::string padded(char prefix, int index, int width)
{
    std::string num = std::to_string(index);
    if (static_cast<int>(num.size()) < width)
        num.insert(0, static_cast<std::size_t>(width) - num.size(), '0');
    return std::string(1, prefix) + num;
}

Label flip_to_other(CounterRng& rng, Label current, const LabelDomain& domain)
{
    const auto idx = *domain.index_of(current);
    auto other = rng.below(domain.size() - 1);
    if (other >= idx)
        ++other;
    return domain.labels()[other];
}

} // namespace

std::string synth_annotator_id(int index, int count)
{
    return padded('a', index + 1, std::max(2, digits(count)));
}

std::string synth_sample_id(int index, int count)
{
    return padded('s', index + 1, std::max(4, digits(count)));
}

double label_fidelity(int labels, double flip_probability)
{
    const double c = labels;
    return (c * (1.0 - flip_probability) - 1.0) / (c - 1.0);
}

AnnotationSet flip_labels(const AnnotationSet& ann, double flip_probability, std::uint64_t seed,
                          const std::string& stream)
{
    std::vector<AnnotationRecord> out;
    out.reserve(ann.label_count());
    for (std::size_t k = 0; k < ann.annotator_count(); ++k) {
        CounterRng rng(seed, stream + "/" + ann.annotators()[k]);
        for (const auto& e : ann.entries(k)) {
            Label label = e.label;
            // Both draws happen unconditionally so streams line up across
            // different flip probabilities.
            const bool flip = rng.bernoulli(flip_probability);
            const Label other = flip_to_other(rng, label, ann.domain());
            if (flip)
                label = other;
            out.push_back({ann.samples()[e.sample], ann.annotators()[k], label});
        }
    }
    return AnnotationSet::from_records(out, ann.domain());
}

SynthCorpus gen_corpus(const SynthConfig& cfg)
{
    cfg.validate();
    const int m = cfg.annotators, n = cfg.samples, kc = cfg.clusters, c = cfg.labels;
    const LabelDomain domain = LabelDomain::range(c);

    SynthCorpus corpus;
    corpus.config = cfg;
    auto& truth = corpus.truth;

    truth.cluster_of.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
        truth.cluster_of[static_cast<std::size_t>(k)] = k % kc;

    {
        CounterRng rng(cfg.seed, "base");
        truth.base_labels.resize(static_cast<std::size_t>(n));
        for (auto& label : truth.base_labels)
            label = static_cast<Label>(rng.below(static_cast<std::uint64_t>(c)));
    }
    truth.cluster_labels.assign(static_cast<std::size_t>(kc), {});
    for (int g = 0; g < kc; ++g) {
        CounterRng rng(cfg.seed, "cluster/" + std::to_string(g));
        auto& labels = truth.cluster_labels[static_cast<std::size_t>(g)];
        labels.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const bool copy = rng.bernoulli(cfg.cluster_coupling);
            const auto own = static_cast<Label>(rng.below(static_cast<std::uint64_t>(c)));
            labels[static_cast<std::size_t>(i)] =
                copy ? truth.base_labels[static_cast<std::size_t>(i)] : own;
        }
    }

    const int per_annotator =
        std::clamp(static_cast<int>(std::lround(cfg.coverage * n)), 1, n);

    std::vector<std::string> annotator_ids(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
        annotator_ids[static_cast<std::size_t>(k)] = synth_annotator_id(k, m);

    std::vector<AnnotationRecord> records;
    std::vector<VectorRecord> features, attentions;
    records.reserve(static_cast<std::size_t>(m * per_annotator));

    // Tendency vector u_k: shared axis, cluster axis and an annotator axis,
    // weighted so that u_k . u_l equals the expected kappa between k and l.
    const double a = label_fidelity(c, cfg.annotator_noise);
    const double coupling = cfg.cluster_coupling;
    const double w_shared = a * coupling;
    const double w_cluster = a * std::sqrt(std::max(0.0, 1.0 - coupling * coupling));
    const double w_own = std::sqrt(std::max(0.0, 1.0 - a * a));

    for (int k = 0; k < m; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const int cluster = truth.cluster_of[ku];
        const auto& id = annotator_ids[ku];

        std::vector<int> chosen(static_cast<std::size_t>(n));
        std::iota(chosen.begin(), chosen.end(), 0);
        {
            CounterRng rng(cfg.seed, "coverage/" + id);
            for (int i = 0; i < per_annotator; ++i) {
                const auto j = static_cast<std::size_t>(i) +
                               rng.below(static_cast<std::uint64_t>(n - i));
                std::swap(chosen[static_cast<std::size_t>(i)], chosen[j]);
            }
        }
        chosen.resize(static_cast<std::size_t>(per_annotator));
        std::sort(chosen.begin(), chosen.end());

        std::vector<double> tendency(static_cast<std::size_t>(cfg.feature_dim), 0.0);
        tendency[0] = w_shared;
        tendency[static_cast<std::size_t>(1 + cluster)] = w_cluster;
        tendency[static_cast<std::size_t>(1 + kc + k)] = w_own;

        std::vector<double> profile(static_cast<std::size_t>(cfg.regions), 1.0);
        for (int r = 0; r < cfg.regions; ++r) {
            if (r % kc == cluster)
                profile[static_cast<std::size_t>(r)] += 4.0;
            if (r == k % cfg.regions)
                profile[static_cast<std::size_t>(r)] += 2.0;
        }

        CounterRng label_rng(cfg.seed, "annotator/" + id);
        CounterRng feature_rng(cfg.seed, "features/" + id);
        CounterRng attention_rng(cfg.seed, "attention/" + id);
        for (int i : chosen) {
            const auto iu = static_cast<std::size_t>(i);
            const auto& sample = synth_sample_id(i, n);
            Label label = truth.cluster_labels[static_cast<std::size_t>(cluster)][iu];
            const bool flip = label_rng.bernoulli(cfg.annotator_noise);
            const Label other = flip_to_other(label_rng, label, domain);
            if (flip)
                label = other;
            records.push_back({sample, id, label});

            VectorRecord f{sample, id, tendency};
            for (auto& v : f.values)
                v += cfg.feature_noise * feature_rng.normal();
            features.push_back(std::move(f));

            VectorRecord w{sample, id, profile};
            double total = 0.0;
            for (auto& v : w.values) {
                v = std::max(0.0, v + cfg.feature_noise * attention_rng.normal());
                total += v;
            }
            if (!(total > 0.0))
                std::fill(w.values.begin(), w.values.end(), 1.0);
            attentions.push_back(std::move(w));
        }
    }

    corpus.annotations = AnnotationSet::from_records(records, domain);
    corpus.predictions = flip_labels(corpus.annotations, cfg.model_noise, cfg.seed, "model");
    corpus.features = VectorTable::features(features);
    corpus.attentions = VectorTable::attentions(attentions);
    return corpus;
}

void save_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw InputError("cannot create directory '" + dir.string() + "': " + ec.message());
    save_annotations(dir / "annotations.jsonl", corpus.annotations);
    save_annotations(dir / "predictions.jsonl", corpus.predictions);
    save_vectors(dir / "features.jsonl", corpus.features);
    save_vectors(dir / "attentions.jsonl", corpus.attentions);

    const auto& cfg = corpus.config;
    nlohmann::ordered_json truth;
    truth["config"] = {{"annotators", cfg.annotators},
                       {"samples", cfg.samples},
                       {"clusters", cfg.clusters},
                       {"labels", cfg.labels},
                       {"noise", cfg.annotator_noise},
                       {"model_noise", cfg.model_noise},
                       {"feature_dim", cfg.feature_dim},
                       {"feature_noise", cfg.feature_noise},
                       {"regions", cfg.regions},
                       {"coverage", cfg.coverage},
                       {"cluster_coupling", cfg.cluster_coupling},
                       {"seed", cfg.seed}};
    nlohmann::ordered_json clusters = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < corpus.truth.cluster_of.size(); ++k)
        clusters[synth_annotator_id(static_cast<int>(k), cfg.annotators)] =
            corpus.truth.cluster_of[k];
    truth["cluster_of"] = clusters;

    std::ofstream out(dir / "truth.json", std::ios::binary | std::ios::trunc);
    if (!out)
        throw InputError("cannot write '" + (dir / "truth.json").string() + "'");
    out << truth.dump(2) << '\n';
}

AnnotationSet baseline_random_labels(const AnnotationSet& ann, std::uint64_t seed)
{
    const auto& labels = ann.domain().labels();
    if (labels.empty())
        throw InputError("random-label baseline: empty label domain");
    CounterRng rng(seed, "baseline/random-labels");
    auto records = ann.records();
    for (auto& r : records)
        r.label = labels[rng.below(labels.size())];
    return AnnotationSet::from_records(records, ann.domain());
}

AnnotationSet baseline_consensus_labels(const AnnotationSet& ann)
{
    const std::size_t c = ann.domain().size();
    std::vector<std::vector<int>> votes(ann.samples().size(), std::vector<int>(c, 0));
    for (std::size_t k = 0; k < ann.annotator_count(); ++k)
        for (const auto& e : ann.entries(k))
            ++votes[e.sample][*ann.domain().index_of(e.label)];

    std::vector<Label> majority(ann.samples().size());
    for (std::size_t s = 0; s < votes.size(); ++s) {
        // max_element returns the first maximum, i.e. the smallest label.
        const auto best = std::max_element(votes[s].begin(), votes[s].end()) - votes[s].begin();
        majority[s] = ann.domain().labels()[static_cast<std::size_t>(best)];
    }
    auto records = ann.records();
    for (auto& r : records)
        r.label = majority[*ann.sample_index(r.sample_id)];
    return AnnotationSet::from_records(records, ann.domain());
}

FeatureTable baseline_uniform_features(const std::vector<std::string>& annotators, int dim)
{
    if (dim < 1)
        throw InputError("uniform-feature baseline: dimension must be >= 1");
    std::vector<double> unit(static_cast<std::size_t>(dim), 0.0);
    unit[0] = 1.0;
    std::vector<VectorRecord> records;
    for (const auto& id : annotators)
        records.push_back({"uniform", id, unit});
    return VectorTable::features(records);
}

FeatureTable baseline_random_features(const std::vector<std::string>& annotators, int dim,
                                      std::uint64_t seed)
{
    if (dim < 1)
        throw InputError("random-feature baseline: dimension must be >= 1");
    std::vector<VectorRecord> records;
    for (const auto& id : annotators) {
        CounterRng rng(seed, "baseline/random-features/" + id);
        std::vector<double> v(static_cast<std::size_t>(dim));
        for (auto& x : v)
            x = rng.normal();
        records.push_back({"random", id, std::move(v)});
    }
    return VectorTable::features(records);
}

} // namespace tendeval
