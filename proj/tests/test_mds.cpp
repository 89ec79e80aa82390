#include "oracles.hpp"

#include "tendeval/error.hpp"
#include "tendeval/mds.hpp"
#include "tendeval/rng.hpp"
#include "tendeval/simulation.hpp"

#include <doctest.h>

#ifdef TENDEVAL_TEST_HAVE_EIGEN
#include <Eigen/Dense>
#endif

#include <cmath>
#include <numbers>

using namespace tendeval;

namespace {

DissimilarityMatrix from_points(const std::vector<Point2>& p)
{
    DissimilarityMatrix d;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i)
        d.annotators.push_back("p" + std::to_string(i));
    d.values.assign(n * n, 0.0);
    d.imputed.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d.values[i * n + j] = std::hypot(p[i][0] - p[j][0], p[i][1] - p[j][1]);
    return d;
}

double dist(const Point2& a, const Point2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

std::vector<Point2> random_points(std::size_t n, std::uint64_t seed)
{
    CounterRng rng(seed, "points");
    std::vector<Point2> p(n);
    for (auto& q : p)
        q = {rng.normal() * 3, rng.normal()};
    return p;
}

std::vector<Point2> rotate(const std::vector<Point2>& p, double theta, double scale, Point2 shift)
{
    std::vector<Point2> out;
    const double c = std::cos(theta), s = std::sin(theta);
    for (const auto& q : p)
        out.push_back({scale * (c * q[0] - s * q[1]) + shift[0],
                       scale * (s * q[0] + c * q[1]) + shift[1]});
    return out;
}

SimilarityMatrix uniform_similarity(std::size_t n, double v)
{
    SimilarityMatrix s;
    for (std::size_t i = 0; i < n; ++i)
        s.annotators.push_back("a" + std::to_string(i));
    s.values = MaskedMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            s.values.set(i, j, v);
    return s;
}

} // namespace

TEST_CASE("to_dissimilarity")
{
    SimilarityMatrix s;
    s.annotators = {"a", "b", "c", "d"};
    s.values = MaskedMatrix(4);
    s.values.set(0, 1, 1.0);
    s.values.set(0, 2, -1.0);
    s.values.set(0, 3, 0.25);
    s.values.set(1, 2, 0.5);
    s.values.set(1, 3, -0.3);
    const auto d = to_dissimilarity(s);
    CHECK(d.at(0, 1) == 0.0);
    CHECK(d.at(0, 2) == 2.0);
    CHECK(d.at(0, 3) == 0.75);
    CHECK(d.at(1, 3) == doctest::Approx(1.3).epsilon(1e-15));
    // (2,3) missing: mean of {0, 2, 0.75, 0.5, 1.3}.
    CHECK(d.at(2, 3) == doctest::Approx((0 + 2 + 0.75 + 0.5 + 1.3) / 5).epsilon(1e-15));
    CHECK(d.at(3, 2) == d.at(2, 3));
    CHECK(d.imputed_pair_count() == 1);
    CHECK(d.at(2, 2) == 0.0);

    SimilarityMatrix empty;
    empty.annotators = {"a", "b"};
    empty.values = MaskedMatrix(2);
    CHECK_THROWS_AS(to_dissimilarity(empty), InputError);
}

TEST_CASE("jacobi eigen decomposition")
{
    SUBCASE("diagonal input")
    {
        const auto e = jacobi_eigen({1, 0, 0, 0, 3, 0, 0, 0, 2}, 3);
        CHECK(e.values == std::vector<double>{3, 2, 1});
    }
    SUBCASE("random symmetric matrices satisfy A v = lambda v")
    {
        CounterRng rng(41, "jacobi");
        for (int t = 0; t < 20; ++t) {
            const std::size_t n = 2 + rng.below(10);
            std::vector<double> a(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j)
                    a[i * n + j] = a[j * n + i] = rng.normal();
            const auto e = jacobi_eigen(a, n);
            for (std::size_t c = 0; c < n; ++c) {
                if (c + 1 < n)
                    CHECK(e.values[c] >= e.values[c + 1]);
                double norm = 0.0, first = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    double av = 0.0;
                    for (std::size_t k = 0; k < n; ++k)
                        av += a[r * n + k] * e.vector_component(k, c);
                    CHECK(std::abs(av - e.values[c] * e.vector_component(r, c)) < 1e-9);
                    norm += e.vector_component(r, c) * e.vector_component(r, c);
                    if (first == 0.0 && std::abs(e.vector_component(r, c)) > 1e-12)
                        first = e.vector_component(r, c);
                }
                CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(first > 0.0);
            }
#ifdef TENDEVAL_TEST_HAVE_EIGEN
            Eigen::MatrixXd m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i * n + j];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
            const auto& ev = solver.eigenvalues(); // ascending
            for (std::size_t c = 0; c < n; ++c)
                CHECK(std::abs(e.values[c] - ev(static_cast<Eigen::Index>(n - 1 - c))) < 1e-9);
#endif
        }
    }
    SUBCASE("sweep cap")
    {
        CHECK_THROWS_AS(jacobi_eigen({1, 2, 3, 2, 1, 4, 3, 4, 1}, 3, 0), ComputeError);
    }
}

TEST_CASE("classical mds")
{
    SUBCASE("equilateral triangle")
    {
        DissimilarityMatrix d;
        d.annotators = {"a", "b", "c"};
        d.values = {0, 1, 1, 1, 0, 1, 1, 1, 0};
        d.imputed.assign(9, 0);
        const auto e = classical_mds(d);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = i + 1; j < 3; ++j)
                CHECK(std::abs(dist(e.coords[i], e.coords[j]) - 1.0) < 1e-9);
        CHECK(e.stress < 1e-9);
    }
    SUBCASE("two clusters of identical points")
    {
        DissimilarityMatrix d;
        d.annotators = {"a", "b", "c", "d", "e"};
        const std::vector<int> group{0, 0, 0, 1, 1};
        d.values.assign(25, 0.0);
        d.imputed.assign(25, 0);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j)
                d.values[i * 5 + j] = group[i] == group[j] ? 0.0 : 1.0;
        const auto e = classical_mds(d);
        CHECK(dist(e.coords[0], e.coords[1]) < 1e-9);
        CHECK(dist(e.coords[1], e.coords[2]) < 1e-9);
        CHECK(dist(e.coords[3], e.coords[4]) < 1e-9);
        CHECK(std::abs(dist(e.coords[0], e.coords[3]) - 1.0) < 1e-9);
    }
    SUBCASE("random planar points are recovered")
    {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto p = random_points(10, seed);
            const auto e = classical_mds(from_points(p));
            double cx = 0, cy = 0;
            for (std::size_t i = 0; i < 10; ++i) {
                cx += e.coords[i][0];
                cy += e.coords[i][1];
                for (std::size_t j = i + 1; j < 10; ++j) {
                    const double want = dist(p[i], p[j]);
                    CHECK(std::abs(dist(e.coords[i], e.coords[j]) - want) / want < 1e-6);
                }
            }
            CHECK(std::abs(cx) < 1e-9);
            CHECK(std::abs(cy) < 1e-9);
            CHECK(e.eigenvalues[0] >= e.eigenvalues[1]);
            CHECK(e.eigenvalues[1] >= 0.0);
            CHECK(e.warnings.empty());
        }
    }
    SUBCASE("repeatable bit for bit")
    {
        const auto d = from_points(random_points(9, 77));
        const auto a = classical_mds(d), b = classical_mds(d);
        CHECK(a.coords == b.coords);
        CHECK(a.stress == b.stress);
    }
    SUBCASE("too few points")
    {
        DissimilarityMatrix d;
        d.annotators = {"a", "b"};
        d.values = {0, 1, 1, 0};
        d.imputed.assign(4, 0);
        CHECK_THROWS_AS(classical_mds(d), InputError);
    }
}

TEST_CASE("procrustes alignment")
{
    const auto ref = random_points(8, 5);
    SUBCASE("rotated copy")
    {
        const auto r = procrustes_align(ref, rotate(ref, 1.1, 1.0, {2, -3}));
        CHECK(r.disparity < 1e-10);
        CHECK_FALSE(r.reflected);
        for (std::size_t i = 0; i < ref.size(); ++i)
            CHECK(dist(r.aligned[i], ref[i]) < 1e-9);
    }
    SUBCASE("scaled copy")
    {
        const auto r = procrustes_align(ref, rotate(ref, 0.0, 3.0, {0, 0}));
        CHECK(r.disparity < 1e-10);
        CHECK(r.scale == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("reflected copy")
    {
        auto mirrored = ref;
        for (auto& q : mirrored)
            q[1] = -q[1];
        const auto r = procrustes_align(ref, rotate(mirrored, 0.4, 2.0, {1, 1}));
        CHECK(r.disparity < 1e-10);
        CHECK(r.reflected);
    }
    SUBCASE("noisy copy matches the angle scan oracle")
    {
        CounterRng rng(6, "procrustes-noise");
        for (int t = 0; t < 5; ++t) {
            auto target = rotate(ref, 0.3 + t, 1.5, {0.5, 0.5});
            for (auto& q : target) {
                q[0] += 0.1 * rng.normal();
                q[1] += 0.1 * rng.normal();
            }
            const auto r = procrustes_align(ref, target);
            CHECK(std::abs(r.disparity - oracle::procrustes_scan(ref, target)) < 1e-6);
            // Disparity does not depend on a pre-rotation of the target.
            const auto r2 = procrustes_align(ref, rotate(target, 2.0, 1.0, {0, 0}));
            CHECK(std::abs(r.disparity - r2.disparity) < 1e-12);
        }
    }
    SUBCASE("self alignment and errors")
    {
        CHECK(procrustes_align(ref, ref).disparity < 1e-12);
        CHECK_THROWS_AS(procrustes_align(ref, std::vector<Point2>(8, Point2{1, 1})), ComputeError);
        CHECK_THROWS_AS(procrustes_align(ref, random_points(7, 1)), InputError);
    }
}

TEST_CASE("agreement clusters")
{
    const auto all_high = agreement_clusters(uniform_similarity(5, 0.9), 0.6);
    CHECK(all_high.cluster_count == 1);
    const auto all_low = agreement_clusters(uniform_similarity(5, 0.1), 0.6);
    CHECK(all_low.cluster_count == 5);
    CHECK(all_low.assignment == std::vector<int>{0, 1, 2, 3, 4});
    // Edges at exactly the threshold do not connect.
    CHECK(agreement_clusters(uniform_similarity(3, 0.6), 0.6).cluster_count == 3);

    // Chain 0-2, 2-4 joins transitively; 1-3 forms a second cluster.
    auto s = uniform_similarity(5, 0.0);
    s.values.set(0, 2, 0.7);
    s.values.set(2, 4, 0.7);
    s.values.set(1, 3, 0.9);
    s.values.invalidate(0, 1);
    const auto c = agreement_clusters(s, 0.6);
    CHECK(c.assignment == std::vector<int>{0, 1, 0, 1, 0});
    CHECK(c.cluster_count == 2);
}

TEST_CASE("agreement clusters recover the planted clustering")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthConfig cfg;
        cfg.seed = seed;
        cfg.annotator_noise = 0.05;
        cfg.cluster_coupling = 0.0;
        const auto corpus = gen_corpus(cfg);
        const auto s = ground_truth_similarity(corpus.annotations, 10);
        const auto c = agreement_clusters(s, 0.6);
        CHECK(c.cluster_count == cfg.clusters);
        for (std::size_t i = 0; i < c.assignment.size(); ++i)
            for (std::size_t j = 0; j < c.assignment.size(); ++j)
                CHECK((c.assignment[i] == c.assignment[j]) ==
                      (corpus.truth.cluster_of[i] == corpus.truth.cluster_of[j]));
    }
}
