#include "oracles.hpp"
#include "test_util.hpp"

#include "tendeval/alignment.hpp"
#include "tendeval/consistency.hpp"
#include "tendeval/error.hpp"
#include "tendeval/rng.hpp"
#include "tendeval/simulation.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace tendeval;

TEST_CASE("counter rng")
{
    CounterRng a(1, "x"), b(1, "x"), c(1, "y"), d(2, "x");
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
    CHECK(va != d.next_u64());
    // Output i depends only on (seed, tag, i).
    CounterRng e(1, "x");
    e.next_u64();
    e.next_u64();
    CounterRng f(1, "x");
    f.uniform();
    f.uniform();
    CHECK(e.next_u64() == f.next_u64());
    CHECK(mix64(0) == 0);
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);

    CounterRng g(5, "range");
    for (int i = 0; i < 1000; ++i) {
        const double u = g.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(g.below(7) < 7);
    }
}

TEST_CASE("config validation")
{
    SynthConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.clusters = 13;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = cfg;
    bad.labels = 1;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = cfg;
    bad.coverage = 0.0;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = cfg;
    bad.feature_dim = 10;
    CHECK_THROWS_AS(gen_corpus(bad), InputError);
}

TEST_CASE("generated corpus honours its config")
{
    SynthConfig cfg;
    cfg.samples = 200;
    const auto c = gen_corpus(cfg);
    CHECK(c.annotations.annotator_count() == 12);
    CHECK(c.annotations.domain() == LabelDomain::range(5));
    CHECK(c.predictions.same_keys(c.annotations));
    CHECK(c.features.dimension() == 64);
    CHECK(c.attentions.dimension() == 16);
    CHECK(c.truth.cluster_of.size() == 12);
    CHECK(c.truth.cluster_labels.size() == 3);
    for (std::size_t k = 0; k < 12; ++k) {
        CHECK(c.truth.cluster_of[k] == static_cast<int>(k % 3));
        const double share = static_cast<double>(c.annotations.entries(k).size()) / 200.0;
        CHECK(share == doctest::Approx(0.8).epsilon(0.15));
    }
    for (std::size_t k = 0; k < c.attentions.annotators().size(); ++k)
        for (const auto& e : c.attentions.entries(k)) {
            double sum = 0.0;
            for (double w : e.values) {
                CHECK(w >= 0.0);
                sum += w;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("noise-free clusters agree perfectly")
{
    SynthConfig cfg;
    cfg.annotator_noise = 0.0;
    cfg.samples = 300;
    const auto c = gen_corpus(cfg);
    const auto m = consistency_matrix(c.annotations, 10);
    for (std::size_t k = 0; k < 12; ++k)
        for (std::size_t l = k + 1; l < 12; ++l)
            if (c.truth.cluster_of[k] == c.truth.cluster_of[l])
                CHECK(m.kappa.value(k, l) == 1.0);
}

TEST_CASE("independent clusters give near-zero cross kappa")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SynthConfig cfg;
        cfg.seed = seed;
        cfg.annotator_noise = 0.0;
        cfg.labels = 2;
        cfg.cluster_coupling = 0.0;
        const auto c = gen_corpus(cfg);
        const auto m = consistency_matrix(c.annotations, 10);
        for (std::size_t k = 0; k < 12; ++k)
            for (std::size_t l = k + 1; l < 12; ++l)
                if (c.truth.cluster_of[k] != c.truth.cluster_of[l])
                    CHECK(std::abs(m.kappa.value(k, l)) < 0.15);
    }
}

TEST_CASE("within-cluster kappa matches the analytic value")
{
    SynthConfig cfg;
    cfg.samples = 1000;
    const double expected = oracle::within_cluster_kappa(cfg.labels, cfg.annotator_noise);
    // Cross-check the oracle against the fidelity closed form a^2.
    const double a = label_fidelity(cfg.labels, cfg.annotator_noise);
    CHECK(expected == doctest::Approx(a * a).epsilon(1e-12));

    const auto c = gen_corpus(cfg);
    const auto m = consistency_matrix(c.annotations, 10);
    const double pe = 1.0 / cfg.labels;
    const double po = expected * (1.0 - pe) + pe;
    for (std::size_t k = 0; k < 12; ++k)
        for (std::size_t l = k + 1; l < 12; ++l) {
            if (c.truth.cluster_of[k] != c.truth.cluster_of[l])
                continue;
            const double n = static_cast<double>(m.overlap(k, l));
            const double sigma = std::sqrt(po * (1.0 - po) / n) / (1.0 - pe);
            CHECK(std::abs(m.kappa.value(k, l) - expected) < 3.0 * sigma);
        }
}

TEST_CASE("generation is deterministic")
{
    SynthConfig cfg;
    cfg.samples = 60;
    testutil::TempDir dir;
    save_corpus(gen_corpus(cfg), dir / "one");
    save_corpus(gen_corpus(cfg), dir / "two");
    for (const char* name : {"annotations.jsonl", "predictions.jsonl", "features.jsonl",
                             "attentions.jsonl", "truth.json"}) {
        const auto a = testutil::read_text(dir / "one" / name);
        CHECK_FALSE(a.empty());
        CHECK(a == testutil::read_text(dir / "two" / name));
    }
    cfg.seed = 8;
    save_corpus(gen_corpus(cfg), dir / "three");
    CHECK(testutil::read_text(dir / "one" / "annotations.jsonl") !=
          testutil::read_text(dir / "three" / "annotations.jsonl"));
}

TEST_CASE("random label baseline")
{
    SynthConfig cfg;
    cfg.samples = 1000;
    const auto c = gen_corpus(cfg);
    const auto r = baseline_random_labels(c.annotations, 3);
    CHECK(r.same_keys(c.annotations));
    CHECK(r == baseline_random_labels(c.annotations, 3));
    std::map<Label, double> freq;
    double total = 0.0;
    for (const auto& rec : r.records()) {
        ++freq[rec.label];
        ++total;
    }
    CHECK(total >= 9000);
    const double p = 0.2;
    const double sigma = std::sqrt(total * p * (1 - p));
    CHECK(freq.size() == 5);
    for (const auto& [label, count] : freq)
        CHECK(std::abs(count - total * p) < 3 * sigma);
}

TEST_CASE("consensus baseline")
{
    SUBCASE("majority and ties")
    {
        const auto ann = testutil::dense_annotations({{0, 0}, {0, 1}, {1, -1}}, 2);
        const auto c = baseline_consensus_labels(ann);
        CHECK(c.same_keys(ann));
        CHECK(c.label(0, 0) == 0);
        CHECK(c.label(1, 0) == 0);
        CHECK(c.label(2, 0) == 0);
        // Sample 1 is a 0/1 tie.
        CHECK(c.label(0, 1) == 0);
        CHECK(c.label(1, 1) == 0);
    }
    SUBCASE("predicted consistency is all ones")
    {
        const auto corpus = gen_corpus(SynthConfig{});
        const auto m = consistency_matrix(baseline_consensus_labels(corpus.annotations), 10);
        for (std::size_t k = 0; k < m.size(); ++k)
            for (std::size_t l = 0; l < m.size(); ++l)
                if (m.kappa.valid(k, l))
                    CHECK(m.kappa.value(k, l) == 1.0);
    }
}

TEST_CASE("feature baselines")
{
    const auto corpus = gen_corpus(SynthConfig{});
    const auto names = corpus.annotations.annotators();
    const auto s_true = ground_truth_similarity(corpus.annotations, 10);
    const auto uniform = baseline_uniform_features(names, 64);
    CHECK(uniform.entry_count() == names.size());

    // Uniform BAE equals 1 - ||J - S|| / ||S|| by direct summation.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = 0; j < names.size(); ++j)
            if (s_true.values.valid(i, j)) {
                num += (1.0 - s_true.values.value(i, j)) * (1.0 - s_true.values.value(i, j));
                den += s_true.values.value(i, j) * s_true.values.value(i, j);
            }
    CHECK(bae(model_similarity(uniform), s_true).score ==
          doctest::Approx(1.0 - std::sqrt(num) / std::sqrt(den)).epsilon(1e-12));

    CHECK(baseline_random_features(names, 16, 4) == baseline_random_features(names, 16, 4));
    CHECK_THROWS_AS(baseline_uniform_features(names, 0), InputError);
}

TEST_CASE("clustered features separate clusters")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SynthConfig cfg;
        cfg.seed = seed;
        const auto c = gen_corpus(cfg);
        const auto s = model_similarity(c.features);
        double within = 2.0, across = -2.0;
        for (std::size_t k = 0; k < 12; ++k)
            for (std::size_t l = k + 1; l < 12; ++l) {
                if (c.truth.cluster_of[k] == c.truth.cluster_of[l])
                    within = std::min(within, s.values.value(k, l));
                else
                    across = std::max(across, s.values.value(k, l));
            }
        CHECK(within > across);
    }
}

TEST_CASE("flip_labels")
{
    const auto corpus = gen_corpus(SynthConfig{});
    const auto& ann = corpus.annotations;
    CHECK(flip_labels(ann, 0.0, 1, "t") == ann);
    const auto all = flip_labels(ann, 1.0, 1, "t");
    for (std::size_t k = 0; k < ann.annotator_count(); ++k)
        for (const auto& e : ann.entries(k))
            CHECK(all.label(k, e.sample) != e.label);
    // Lower flip probabilities flip a subset of the keys flipped by higher ones.
    const auto low = flip_labels(ann, 0.1, 1, "t"), high = flip_labels(ann, 0.3, 1, "t");
    for (std::size_t k = 0; k < ann.annotator_count(); ++k)
        for (const auto& e : ann.entries(k))
            if (low.label(k, e.sample) != e.label)
                CHECK(high.label(k, e.sample) == low.label(k, e.sample));
}
