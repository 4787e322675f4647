#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>

#include "weylscale/rng.hpp"
#include "weylscale/weyl.hpp"

using namespace weylscale;

namespace {
const Grid g(4096, 32.0);

GridFunction random_symbol(CounterRng& rng) {
    return make_bump(g, rng.uniform(-4.0, 4.0), rng.uniform(0.4, 1.5),
                     complexd(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
}
}  // namespace

TEST_CASE("symplectic form") {
    CounterRng rng(11);
    const GridFunction f = random_symbol(rng), h = random_symbol(rng);
    CHECK(std::abs(symplectic(f, f)) < 1e-12);
    CHECK(std::abs(symplectic(f, h) + symplectic(h, f)) < 1e-12);

    SECTION("imaginary against real reduces to minus the overlap") {
        const GridFunction u = make_bump(g, 0.0, 1.0, 1.0);
        const GridFunction v = make_bump(g, 0.3, 1.0, 1.0);
        const GridFunction iu = complexd(0.0, 1.0) * u;
        double direct = 0.0;
        for (int j = 0; j < g.n; ++j)
            direct += u.samples[j].real() * v.samples[j].real();
        direct *= g.dx();
        CHECK(std::abs(symplectic(iu, v) + direct) < 1e-10);
    }
}

TEST_CASE("normal form") {
    CounterRng rng(5);
    const GridFunction f = random_symbol(rng), h = random_symbol(rng);

    SECTION("word and its inverse cancel") {
        WeylWord w;
        w.append(f).append(complexd(-1.0) * f);
        const NormalForm nf = normal_form(w);
        CHECK(std::abs(nf.phase - 1.0) < 1e-12);
        for (const auto& v : nf.symbol.samples) REQUIRE(std::abs(v) < 1e-13);
    }

    SECTION("group commutator leaves the phase e^{-i sigma}") {
        WeylWord w;
        w.append(f).append(h).append(complexd(-1.0) * f).append(complexd(-1.0) * h);
        const NormalForm nf = normal_form(w);
        const complexd expect = std::polar(1.0, -symplectic(f, h));
        CHECK(std::abs(nf.phase - expect) < 1e-12);
        for (const auto& v : nf.symbol.samples) REQUIRE(std::abs(v) < 1e-13);
    }

    SECTION("random words match the ordered-pairs phase oracle") {
        for (int t = 0; t < 20; ++t) {
            WeylWord w;
            const int len = 2 + static_cast<int>(rng.uniform() * 3);
            std::vector<GridFunction> fs;
            for (int i = 0; i < len; ++i) {
                fs.push_back(random_symbol(rng));
                w.append(fs.back());
            }
            double phase = 0.0;
            for (int i = 0; i < len; ++i)
                for (int j = i + 1; j < len; ++j) phase += -0.5 * symplectic(fs[i], fs[j]);
            const NormalForm nf = normal_form(w);
            REQUIRE(std::abs(nf.phase - std::polar(1.0, phase)) < 1e-10);
            REQUIRE(std::abs(std::abs(nf.phase) - 1.0) < 1e-12);
        }
    }

    SECTION("associativity of the product reduction") {
        for (int t = 0; t < 10; ++t) {
            WeylWord w1, w2, w3;
            w1.append(random_symbol(rng)).append(random_symbol(rng));
            w2.append(random_symbol(rng));
            w3.append(random_symbol(rng)).append(random_symbol(rng));
            const NormalForm a = normal_form((w1 * w2) * w3);
            const NormalForm b = normal_form(w1 * (w2 * w3));
            REQUIRE(std::abs(a.phase - b.phase) < 1e-10);
            for (int j = 0; j < g.n; ++j)
                REQUIRE(std::abs(a.symbol.samples[j] - b.symbol.samples[j]) < 1e-12);
        }
    }
}

TEST_CASE("vacuum expectation values") {
    CounterRng rng(99);
    const QuasiFreeState massive(1.0);
    const QuasiFreeState massless(0.0);

    CHECK(std::abs(vacuum_expect(massive, WeylWord::identity(), g) - 1.0) == 0.0);

    SECTION("massless zero-mode rule gives exactly zero") {
        const GridFunction f = make_bump(g, 0.0, 1.0, 1.0);
        CHECK(vacuum_expect(massless, WeylWord::single(f)) == complexd(0.0));
        CHECK(std::abs(vacuum_expect(massive, WeylWord::single(f))) > 0.0);
    }

    SECTION("two-path evaluation of a product") {
        for (int t = 0; t < 8; ++t) {
            const GridFunction f = random_symbol(rng), h = random_symbol(rng);
            WeylWord w;
            w.append(f).append(h);
            const complexd direct = vacuum_expect(massive, w);
            const complexd expect = std::polar(1.0, -0.5 * symplectic(f, h)) *
                                    std::exp(-0.5 * mass_norm_sq_finite(f + h, 1.0));
            REQUIRE(std::abs(direct - expect) < 1e-10);
        }
    }

    SECTION("hermiticity and normalization") {
        for (int t = 0; t < 10; ++t) {
            WeylWord w;
            const int len = 1 + static_cast<int>(rng.uniform() * 4);
            for (int i = 0; i < len; ++i) w.append(random_symbol(rng));
            const complexd a = vacuum_expect(massive, w);
            const complexd b = vacuum_expect(massive, adjoint(w));
            REQUIRE(std::abs(a - std::conj(b)) < 1e-10);
            REQUIRE(std::abs(a) <= 1.0 + 1e-12);
        }
    }

    SECTION("positivity of a random 4x4 Gram matrix") {
        for (int t = 0; t < 5; ++t) {
            std::vector<GridFunction> fs;
            for (int i = 0; i < 4; ++i) fs.push_back(random_symbol(rng));
            Eigen::Matrix4cd mat;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    WeylWord w;
                    w.append(complexd(-1.0) * fs[i]).append(fs[j]);
                    const complexd v = vacuum_expect(massive, w);
                    mat(i, j) = std::complex<double>(v.real(), v.imag());
                }
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(mat);
            REQUIRE(es.eigenvalues().minCoeff() >= -1e-9);
        }
    }
}

TEST_CASE("weyl vector distance") {
    CounterRng rng(17);
    const GridFunction f = random_symbol(rng), h = random_symbol(rng);
    CHECK(weyl_vector_distance(f, f, 1.0) < 1e-7);

    SECTION("distance to the identity") {
        const double d = weyl_vector_distance(f, GridFunction::zero(g), 1.0);
        const double expect =
            std::sqrt(2.0 - 2.0 * std::exp(-0.5 * mass_norm_sq_finite(f, 1.0)));
        CHECK(std::abs(d - expect) < 1e-10);
    }

    SECTION("matches the expectation-value expansion") {
        WeylWord w;
        w.append(complexd(-1.0) * f).append(h);
        const double dsq = 2.0 - 2.0 * vacuum_expect(QuasiFreeState(1.0), w).real();
        const double d = weyl_vector_distance(f, h, 1.0);
        CHECK(std::abs(d * d - dsq) < 1e-10);
    }
}

TEST_CASE("gauge phase") {
    const GridFunction nullf = make_bump_derivative(g, 0.0, 1.0, 1.0);
    for (double mu : {0.0, 0.7, -2.0})
        for (double nu : {0.0, 1.3})
            CHECK(std::abs(gauge_phase(mu, nu, nullf) - 1.0) < 1e-9);

    const GridFunction b = make_bump(g, 0.0, 1.0, 1.0);
    CHECK(gauge_phase(0.0, 0.0, b) == complexd(1.0));
    const double mom = moment(b).real();
    CHECK(std::abs(gauge_phase(0.4, 0.0, b) - std::polar(1.0, 0.4 * mom)) < 1e-12);
}
