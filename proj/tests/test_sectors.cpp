#include <catch2/catch_amalgamated.hpp>

#include "weylscale/sectors.hpp"

using namespace weylscale;

namespace {
const Grid g(4096, 32.0);
}

TEST_CASE("charge profile construction") {
    const ChargeProfile p(1.5, 0.5, 4);

    SECTION("zero charge gives a vanishing plateau") {
        const ChargeProfile z(0.0, 0.5, 4);
        const GridFunction u = build_un(z, g);
        for (int j = 0; j < g.n; ++j) REQUIRE(std::abs(u.samples[j]) < 1e-14);
    }

    SECTION("ramp region is independent of n") {
        const ChargeProfile p2(1.5, 0.5, 9);
        const GridFunction u4 = build_un(p, g), u9 = build_un(p2, g);
        for (int j = 0; j < g.n; ++j)
            if (std::abs(g.x(j)) < 0.5)
                REQUIRE(u4.samples[j] == u9.samples[j]);
    }

    SECTION("plateau value is exactly q") {
        const GridFunction u = build_un(p, g);
        const int mid = g.index_below(0.5 * (0.5 + 4 * 0.5));
        CHECK(u.samples[mid].real() == 1.5);
    }

    SECTION("compact support with the decay tail") {
        const GridFunction u = build_un(p, g);
        for (int j = 0; j < g.n; ++j)
            if (g.x(j) <= -0.5 || g.x(j) >= 4 * 0.5 + 0.5)
                REQUIRE(std::abs(u.samples[j]) < 1e-14);
    }

    SECTION("plateau escaping the grid is an error") {
        CHECK_THROWS_AS(build_un(ChargeProfile(1.0, 0.5, 80), g), numerical_guard);
    }
}

TEST_CASE("sector phase") {
    const ChargeProfile p(0.8, 0.5, 4);

    SECTION("purely imaginary symbol is invisible") {
        const GridFunction f = complexd(0.0, 1.0) * make_bump(g, 1.0, 0.5, 1.0);
        CHECK(std::abs(sector_phase(p, f) - 1.0) < 1e-12);
    }

    SECTION("support right of the ramp sees the full charge") {
        const GridFunction f = make_bump(g, 2.0, 1.0, 1.0);  // supp in (a, na)
        const complexd expect = std::polar(1.0, -0.8 * moment(f).real());
        CHECK(std::abs(sector_phase(p, f) - expect) < 1e-10);
    }

    SECTION("support left of the profile is invisible") {
        const GridFunction f = make_bump(g, -3.0, 1.0, 1.0);
        CHECK(std::abs(sector_phase(p, f) - 1.0) < 1e-12);
    }

    SECTION("phase multiplicativity") {
        const GridFunction f = make_bump(g, 0.2, 0.8, complexd(0.7, 0.2));
        const GridFunction h = make_bump(g, 1.1, 0.9, complexd(-0.4, 1.0));
        const complexd lhs = sector_phase(p, f + h);
        const complexd rhs = sector_phase(p, f) * sector_phase(p, h);
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }

    SECTION("ramp independence where the paper claims it") {
        const ChargeProfile alt(0.8, 0.5, 4, smoothstep_ramp);
        // Re f supported outside (-a, a) (and inside the plateau)
        const GridFunction f = make_bump(g, 1.5, 0.7, complexd(1.0, 0.5));
        CHECK(std::abs(sector_phase(p, f) - sector_phase(alt, f)) < 1e-10);
        // sanity: with support over the ramp they differ
        const GridFunction over = make_bump(g, 0.0, 0.4, 1.0);
        CHECK(std::abs(sector_phase(p, over) - sector_phase(alt, over)) > 1e-6);
    }
}

TEST_CASE("rho_lambda on symbols") {
    const ChargeProfile p(0.8, 0.5, 4);
    const GridFunction f = make_bump(g, 0.6, 1.2, complexd(0.9, -0.3));

    SECTION("lambda = 1 reduces to the sector phase and the symbol") {
        const PhasedSymbol ps = rho_lambda_symbol(p, f, 1.0);
        CHECK(std::abs(ps.phase - sector_phase(p, f)) == 0.0);
        for (int j = 0; j < g.n; ++j)
            REQUIRE(std::abs(ps.symbol.samples[j] - f.samples[j]) < 1e-12);
    }

    SECTION("the two displayed forms of the phase agree") {
        for (double lam : {1.0, 0.1, 0.01}) {
            const complexd middle = rho_lambda_middle_phase(p, f, lam);
            const complexd final_form = sector_phase(p, f);
            REQUIRE(std::abs(middle - final_form) < 1e-9);
        }
    }

    SECTION("unit modulus and untouched symbol on the null-integral class") {
        const GridFunction nf = make_bump_derivative(g, 0.9, 0.8, complexd(1.0, 0.5));
        const PhasedSymbol ps = rho_lambda_symbol(p, nf, 1.0);
        CHECK(std::abs(std::abs(ps.phase) - 1.0) < 1e-12);
        for (int j = 0; j < g.n; ++j)
            REQUIRE(std::abs(ps.symbol.samples[j] - nf.samples[j]) < 1e-12);
    }
}

TEST_CASE("limit of the rescaled sector phases") {
    const ChargeProfile p(0.8, 0.5, 4);

    SECTION("imaginary symbol gives 1") {
        const GridFunction f = complexd(0.0, 1.0) * make_bump(g, 0.5, 1.0, 1.0);
        CHECK(std::abs(limit_morphism_phase(p, f) - 1.0) < 1e-12);
    }

    SECTION("support beyond the ramp matches the sector phase") {
        const GridFunction f = make_bump(g, 2.5, 0.9, complexd(1.0, 0.2));
        CHECK(std::abs(limit_morphism_phase(p, f) - sector_phase(p, f)) < 1e-10);
    }

    SECTION("straddling support matches the small-lambda sweep") {
        const GridFunction f = make_bump(g, 0.3, 1.2, 1.0);
        const complexd limit = limit_morphism_phase(p, f);
        const complexd swept = rho_of_lambda_phase(p, f, 1e-4);
        CHECK(std::abs(limit - swept) < 1e-3);
        // and the sweep keeps approaching the limit
        const complexd coarser = rho_of_lambda_phase(p, f, 1e-2);
        CHECK(std::abs(limit - swept) < std::abs(limit - coarser));
    }
}

TEST_CASE("stabilization index") {
    const ChargeProfile p(1.0, 0.5, 4);

    SECTION("zero symbol stabilizes immediately") {
        CHECK(stabilization_index(p, GridFunction::zero(g)) == 1);
    }

    SECTION("support left of the radius stabilizes immediately") {
        const GridFunction f = make_bump(g, -2.0, 1.0, 0.3);
        CHECK(stabilization_index(p, f) == 1);
    }

    SECTION("support inside the plateau pins the index to the geometry") {
        // supp Re f = (1.25, 1.85) = (2.5a, 3.7a): stable once na > 1.85
        const GridFunction f = make_bump(g, 1.55, 0.3, 0.2);
        CHECK(stabilization_index(p, f) == 4);
    }

    SECTION("nondecreasing in the support") {
        int prev = 0;
        for (double hi : {1.0, 2.0, 3.0, 4.5}) {
            const GridFunction f = make_bump(g, 0.5 * hi, 0.5 * hi + 0.2, 0.1);
            const int idx = stabilization_index(p, f);
            REQUIRE(idx >= prev);
            prev = idx;
        }
    }
}

TEST_CASE("dilation consistency of the sector phase") {
    // Int u_inf(x/lambda) Re(delta_lambda f)(x) dx = Int u_inf Re f dx
    const ChargeProfile p(1.3, 0.4, 3);
    const GridFunction f = make_bump(g, 0.8, 1.5, complexd(1.0, 0.8));
    for (double lam : {0.5, 0.1, 0.02}) {
        const GridFunction df = dilate(f, lam);
        double lhs = 0.0, rhs = 0.0;
        for (int j = 0; j < g.n; ++j) {
            lhs += p.u_infinity(g.x(j) / lam) * df.samples[j].real();
            rhs += p.u_infinity(g.x(j)) * f.samples[j].real();
        }
        REQUIRE(std::abs(lhs - rhs) * g.dx() < 1e-9);
    }
}
