#include <doctest.h>

#include <cmath>
#include <random>

#include "sparsify/errors.hpp"
#include "sparsify/graph.hpp"
#include "sparsify/graph_io.hpp"
#include "sparsify/linalg.hpp"
#include "support/generators.hpp"

using namespace sparsify;
using doctest::Approx;

namespace {

Matrix diag(std::initializer_list<double> d) {
    Vector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v(i++) = x;
    return v.asDiagonal();
}

}  // namespace

TEST_CASE("graph construction merges parallel edges and normalizes orientation") {
    WeightedGraph g(4, {{2, 1, 1.0}, {1, 2, 2.5}, {0, 3, 1.0}});
    REQUIRE(g.num_edges() == 2);
    CHECK(g.edges()[0] == Edge{0, 3, 1.0});
    CHECK(g.edges()[1] == Edge{1, 2, 3.5});
    CHECK(g.weight(2, 1) == 3.5);
    CHECK(g.weight(0, 1) == 0.0);
}

TEST_CASE("graph construction rejects invalid edges") {
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 3, 1.0}}), InvalidGraph);
    CHECK_THROWS_AS(WeightedGraph(3, {{1, 1, 1.0}}), InvalidGraph);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 0.0}}), InvalidGraph);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, -2.0}}), InvalidGraph);
}

TEST_CASE("components") {
    WeightedGraph g(5, {{0, 1, 1}, {3, 4, 1}});
    const auto c = g.components();
    CHECK(c.count == 3);
    CHECK(c.label == std::vector<int>{0, 0, 1, 2, 2});
    CHECK_FALSE(g.is_connected());
    CHECK(testgen::path(5).is_connected());
}

TEST_CASE("laplacian examples") {
    const Matrix l = laplacian(WeightedGraph(2, {{0, 1, 2.0}}));
    CHECK(l(0, 0) == 2.0);
    CHECK(l(0, 1) == -2.0);
    CHECK(l(1, 0) == -2.0);
    CHECK(l(1, 1) == 2.0);

    CHECK(laplacian(WeightedGraph(3, {})).isZero(0));

    const Vector ev = eigenvalues(laplacian(testgen::complete(3)));
    CHECK(ev(0) == Approx(0.0));
    CHECK(ev(1) == Approx(3.0));
    CHECK(ev(2) == Approx(3.0));
}

TEST_CASE("laplacian properties on random graphs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = testgen::random_connected(rng, 12, 15, 0.2, 3.0);
        const Matrix l = laplacian(g);
        CHECK((l * Vector::Ones(12)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(symmetry_error(l) == 0.0);
        const Vector ev = eigenvalues(l);
        CHECK(std::abs(ev(0)) <= 1e-9);
        CHECK(ev(1) > 0.0);
    }
}

TEST_CASE("eigh examples and invariants") {
    CHECK(eigenvalues(Matrix::Identity(3, 3)).isApprox(Vector::Ones(3)));
    const Vector ev = eigenvalues(diag({3, 1, 2}));
    CHECK(ev(0) == Approx(1.0));
    CHECK(ev(1) == Approx(2.0));
    CHECK(ev(2) == Approx(3.0));

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix a = testgen::gaussian(rng, 15, 15);
        a = (a + a.transpose()).eval();
        const auto dec = eigh(a);
        CHECK(max_abs(a - dec.reconstruct()) <= 1e-9 * std::max(1.0, max_abs(a)));
        CHECK(max_abs(dec.vectors.transpose() * dec.vectors - Matrix::Identity(15, 15)) <= 1e-10);
        for (Eigen::Index i = 1; i < 15; ++i) CHECK(dec.values(i - 1) <= dec.values(i));
    }
}

TEST_CASE("pseudoinverse examples") {
    CHECK(pseudoinverse(diag({2, 0})).isApprox(diag({0.5, 0})));
    Matrix edge(2, 2);
    edge << 1, -1, -1, 1;
    CHECK(max_abs(pseudoinverse(edge) - edge / 4.0) < 1e-14);
    CHECK(pseudoinverse(Matrix::Identity(4, 4)).isApprox(Matrix::Identity(4, 4)));
}

TEST_CASE("pseudoinverse is an involution on the image") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = testgen::random_psd(rng, 8, 5);
        const Matrix ad = pseudoinverse(a);
        const Matrix p = image(a).projection();
        CHECK(max_abs(a * ad - p) <= 1e-8);
        CHECK(max_abs(ad * a - p) <= 1e-8);
        CHECK((pseudoinverse(ad) - a).norm() <= 1e-7 * a.norm());
    }
}

TEST_CASE("Sherman-Morrison pseudoinverse update examples") {
    const Matrix i3 = Matrix::Identity(3, 3);
    const Vector e1 = Vector::Unit(3, 0);
    const Matrix expected = i3 - e1 * e1.transpose() / 2.0;
    CHECK(max_abs(sm_pinv_update(i3, i3, e1) - expected) < 1e-15);
    CHECK(max_abs(sm_pinv_update(i3, i3, Vector::Zero(3)) - i3) == 0.0);

    std::mt19937_64 rng(8);
    const Matrix a = testgen::random_psd(rng, 4, 2);
    const Matrix p = image(a).projection();
    const Vector v = p * testgen::gaussian(rng, 4, 1);
    const Matrix direct = pseudoinverse(a + p * v * v.transpose() * p);
    CHECK(max_abs(sm_pinv_update(pseudoinverse(a), p, v) - direct) <= 1e-8);
}

TEST_CASE("Sherman-Morrison update rejects a vanishing denominator") {
    const Matrix neg = -Matrix::Identity(2, 2);
    CHECK_THROWS_AS(sm_pinv_update(neg, Matrix::Identity(2, 2), Vector::Unit(2, 0)), SingularUpdate);
}

TEST_CASE("restriction examples") {
    const Matrix a = diag({1, 2, 3});
    Matrix q = Matrix::Zero(3, 2);
    q(0, 0) = 1;
    q(2, 1) = 1;
    CHECK(restrict_to(a, Subspace(q)).isApprox(diag({1, 3})));
    CHECK(restrict_to(Matrix::Identity(3, 3), Subspace(q)).isApprox(Matrix::Identity(2, 2)));
    CHECK(eigenvalues(restrict_to(a, Subspace::full(3))).isApprox(eigenvalues(a)));
    CHECK_THROWS_AS(Subspace(Matrix::Ones(3, 1)), PreconditionError);
}

TEST_CASE("relative condition number") {
    std::mt19937_64 rng(2);
    const Matrix a = testgen::random_psd(rng, 6, 4);
    CHECK(relative_condition_number(a, a) == Approx(1.0));
    CHECK(relative_condition_number(3.5 * a, a) == Approx(1.0));

    // K3 against P3: solve det(K − λP) = 0 by the quadratic formula on an
    // orthonormal basis of the complement of the ones vector.
    const Matrix lk = laplacian(testgen::complete(3));
    const Matrix lp = laplacian(testgen::path(3));
    Matrix f(3, 2);
    f << 1 / std::sqrt(2.0), 1 / std::sqrt(6.0), -1 / std::sqrt(2.0), 1 / std::sqrt(6.0), 0, -2 / std::sqrt(6.0);
    const Matrix kr = f.transpose() * lk * f;
    const Matrix pr = f.transpose() * lp * f;
    const double qa = pr.determinant();
    const double qb = -(kr(0, 0) * pr(1, 1) + kr(1, 1) * pr(0, 0) - 2 * kr(0, 1) * pr(0, 1));
    const double qc = kr.determinant();
    const double disc = std::sqrt(qb * qb - 4 * qa * qc);
    const double lo = (-qb - disc) / (2 * qa), hi = (-qb + disc) / (2 * qa);
    CHECK(relative_condition_number(lk, lp) == Approx(hi / lo).epsilon(1e-12));
    CHECK(relative_condition_number(lk, lp) == Approx(3.0).epsilon(1e-12));
    const auto r = pencil_range(lk, lp);
    CHECK(r.lower == Approx(lo).epsilon(1e-12));
    CHECK(r.upper == Approx(hi).epsilon(1e-12));
}

TEST_CASE("pencil rejects mismatched kernels") {
    const Matrix lp = laplacian(testgen::path(3));
    const Matrix split = laplacian(WeightedGraph(3, {{0, 1, 1.0}}));
    CHECK_THROWS_AS(pencil_eigenvalues(split, lp), IncompatibleKernels);
    CHECK_THROWS_AS(pencil_eigenvalues(laplacian(WeightedGraph(3, {{0, 1, 1}, {0, 2, 1}})),
                                       laplacian(WeightedGraph(3, {{0, 1, 1}, {1, 2, 1}})) + Matrix::Identity(3, 3)),
                    IncompatibleKernels);
}

TEST_CASE("graph text parsing") {
    const auto g = io::parse_text("# comment\nn 4\n0 1 2.5\n\n1 2   # trailing\n2 1 0.5\n");
    CHECK(g.num_vertices() == 4);
    REQUIRE(g.num_edges() == 2);
    CHECK(g.weight(0, 1) == 2.5);
    CHECK(g.weight(1, 2) == 1.5);
}

TEST_CASE("graph parse errors carry line numbers") {
    auto line_of = [](const std::string& text) {
        try {
            io::parse_text(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("n 3\n0 1\n0 x\n") == 3);
    CHECK(line_of("n 3\n0 1 0\n") == 2);
    CHECK(line_of("n 3\n0 1 -1\n") == 2);
    CHECK(line_of("n 3\n0 5\n") == 2);
    CHECK(line_of("n 3\n1 1\n") == 2);
    CHECK(line_of("n 3\n0 1 1 7\n") == 2);
    CHECK(line_of("0 1\n") == 1);
    CHECK(line_of("") == 0);
    try {
        io::parse_text("n 3\n0 1\nbad\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(e.exit_code() == 2);
    }
}

TEST_CASE("graph JSON parsing") {
    const auto g = io::parse_graph(R"({"n": 3, "edges": [[0, 1, 2.0], [2, 1]]})");
    CHECK(g.num_vertices() == 3);
    CHECK(g.weight(0, 1) == 2.0);
    CHECK(g.weight(1, 2) == 1.0);
    CHECK_THROWS_AS(io::parse_json(R"({"n": 3, "edges": [[0, 1, 0]]})"), ParseError);
    CHECK_THROWS_AS(io::parse_json(R"({"edges": []})"), ParseError);
    CHECK_THROWS_AS(io::parse_json("{"), ParseError);
}

TEST_CASE("graph serialization round-trips exactly") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = testgen::random_connected(rng, 20, 30, 1e-3, 1e3);
        CHECK(io::parse_graph(io::to_text(g)) == g);
        CHECK(io::parse_graph(io::to_json(g)) == g);
    }
    // Unmerged input serializes to the merged, sorted form.
    const auto g = io::parse_text("n 3\n2 1 1\n1 2 1\n0 2 0.1\n");
    CHECK(io::to_text(g) == "n 3\n0 2 0.10000000000000001\n1 2 2\n");
}

TEST_CASE("fnv1a digest") {
    CHECK(io::fnv1a("") == 14695981039346656037ull);
    CHECK(io::hex_digest("a") == "af63dc4c8601ec8c");
}
