#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "epscope/errors.hpp"
#include "epscope/monodromy.hpp"
#include "oracles.hpp"

using namespace epscope;
using namespace epscope::testing;

namespace {

const Cx kFig1EP = 0.5 * std::polar(1.0, 0.4);

bool phases_match(const std::vector<Cx>& phases, std::vector<Cx> expect, double tol) {
    // multiset comparison
    std::vector<bool> used(expect.size(), false);
    for (const Cx& p : phases) {
        bool ok = false;
        for (std::size_t j = 0; j < expect.size(); ++j) {
            if (!used[j] && std::abs(p - expect[j]) < tol) {
                used[j] = true;
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

} // namespace

TEST_CASE("gauge_align removes phase and scale") {
    const std::vector<Cx> prev{Cx{1, 0}, Cx{0, 0}};
    SUBCASE("pure phase") {
        const std::vector<Cx> next{Cx{0, 1}, Cx{0, 0}};
        const auto out = gauge_align(prev, next);
        CHECK(std::abs(out[0] - 1.0) < 1e-15);
        CHECK(std::abs(out[1]) < 1e-15);
    }
    SUBCASE("scaling") {
        const std::vector<Cx> next{Cx{2, 0}, Cx{0, 0}};
        const auto out = gauge_align(prev, next);
        CHECK(std::abs(out[0] - 1.0) < 1e-15);
    }
    SUBCASE("orthogonal inputs break down") {
        const std::vector<Cx> next{Cx{0, 0}, Cx{1, 0}};
        CHECK_THROWS_AS(gauge_align(prev, next), GaugeBreakdown);
    }
}

TEST_CASE("one loop around the fig1 EP swaps labels with one sign flip") {
    LoopSpec spec;
    spec.center = kFig1EP;
    spec.radius = 0.1;
    spec.steps = 4096;
    spec.loops = 1;
    const MonodromyResult r = encircle(fig1_family(0.0), spec);
    REQUIRE(r.permutation.size() == 2);
    CHECK(r.permutation[0] == 1);
    CHECK(r.permutation[1] == 0);
    CHECK(phases_match(r.phases, {Cx{1, 0}, Cx{-1, 0}}, 1e-3));
    for (const Cx& p : r.phases) CHECK(std::abs(std::abs(p) - 1.0) < 1e-6);
}

TEST_CASE("two and four loops give the period-4 phase structure") {
    LoopSpec spec;
    spec.center = kFig1EP;
    spec.radius = 0.1;
    spec.steps = 2048;
    spec.loops = 2;
    const MatrixFamily f = fig1_family(0.0);
    const MonodromyResult two = encircle(f, spec);
    CHECK(two.permutation == std::vector<std::size_t>{0, 1});
    CHECK(phases_match(two.phases, {Cx{-1, 0}, Cx{-1, 0}}, 1e-3));

    spec.loops = 4;
    const MonodromyResult four = encircle(f, spec);
    CHECK(four.permutation == std::vector<std::size_t>{0, 1});
    CHECK(phases_match(four.phases, {Cx{1, 0}, Cx{1, 0}}, 1e-3));
}

TEST_CASE("a contractible loop is trivial") {
    LoopSpec spec;
    spec.center = Cx{0.0, 0.0};
    spec.radius = 0.1;
    spec.steps = 512;
    spec.loops = 1;
    const MonodromyResult r = encircle(fig1_family(0.0), spec);
    CHECK(r.permutation == std::vector<std::size_t>{0, 1});
    CHECK(phases_match(r.phases, {Cx{1, 0}, Cx{1, 0}}, 1e-3));
}

TEST_CASE("permutation is radius independent") {
    for (double radius : {0.02, 0.05, 0.1}) {
        LoopSpec spec;
        spec.center = kFig1EP;
        spec.radius = radius;
        spec.steps = 1024;
        spec.loops = 1;
        const MonodromyResult r = encircle(fig1_family(0.0), spec);
        CHECK(r.permutation == std::vector<std::size_t>{1, 0});
    }
}

TEST_CASE("orientation inversion inverts the holonomy") {
    LoopSpec ccw;
    ccw.center = kFig1EP;
    ccw.radius = 0.1;
    ccw.steps = 2048;
    ccw.loops = 1;
    LoopSpec cw = ccw;
    cw.orientation = -1;
    const MatrixFamily f = fig1_family(0.0);
    const MonodromyResult a = encircle(f, ccw);
    const MonodromyResult b = encircle(f, cw);
    // a transposition is its own inverse; phases are conjugated (+-1 stay put)
    CHECK(a.permutation == b.permutation);
    CHECK(phases_match(b.phases, {std::conj(a.phases[0]), std::conj(a.phases[1])}, 1e-3));
    // the signed pattern is attached to the opposite labels
    CHECK(std::abs(a.phases[0] + b.phases[0]) < 1e-3);
    CHECK(std::abs(a.phases[1] + b.phases[1]) < 1e-3);
}

TEST_CASE("discretization error decreases roughly first order in step count") {
    const MatrixFamily f = fig1_family(0.0);
    double prev = -1.0;
    for (std::size_t steps : {256, 512, 1024, 2048}) {
        LoopSpec spec;
        spec.center = kFig1EP;
        spec.radius = 0.1;
        spec.steps = steps;
        spec.loops = 1;
        const MonodromyResult r = encircle(f, spec);
        if (prev > 0.0) CHECK(prev / r.discretization_error > 1.8);
        prev = r.discretization_error;
    }
}

TEST_CASE("loops around both conjugate EPs compose") {
    const MatrixFamily f = fig1_family(0.0);
    LoopSpec spec1;
    spec1.center = kFig1EP;
    spec1.radius = 0.08;
    spec1.steps = 2048;
    spec1.loops = 1;
    LoopSpec spec2 = spec1;
    spec2.center = std::conj(kFig1EP);
    LoopSpec big;
    big.center = Cx{kFig1EP.real(), 0.0};
    big.radius = 0.45;
    big.steps = 4096;
    big.loops = 1;

    const MonodromyResult r1 = encircle(f, spec1);
    const MonodromyResult r2 = encircle(f, spec2);
    const MonodromyResult rb = encircle(f, big);

    // permutation composes to the identity
    std::vector<std::size_t> composed(2);
    for (std::size_t k = 0; k < 2; ++k) composed[k] = r2.permutation[r1.permutation[k]];
    CHECK(rb.permutation == composed);
    CHECK(rb.permutation == std::vector<std::size_t>{0, 1});

    // the per-cycle phase product is gauge independent and multiplicative
    const Cx prod1 = r1.phases[0] * r1.phases[1];
    const Cx prod2 = r2.phases[0] * r2.phases[1];
    const Cx prodb = rb.phases[0] * rb.phases[1];
    CHECK(std::abs(prodb - prod1 * prod2) < 1e-2);
    CHECK(phases_match(rb.phases, {Cx{1, 0}, Cx{1, 0}}, 1e-2));
}

TEST_CASE("sheet_swap_check distinguishes EPs from regular points") {
    const MatrixFamily f = fig1_family(0.0);
    SUBCASE("true at each closed-form EP") {
        for (const auto& ep : ep_closed_form(fig1_params(0.0)))
            CHECK(sheet_swap_check(f, ep));
    }
    SUBCASE("false around a regular point") {
        EPLocation fake;
        fake.lambda_c = Cx{0.0, 0.0};
        fake.pair = {0, 1};
        fake.energy = Cx{1.0, 0.0};
        CHECK_FALSE(sheet_swap_check(f, fake));
    }
}

TEST_CASE("block-diagonal family: loop around one block's EP fixes the rest") {
    TwoLevelParams p2 = fig1_params(0.0);
    p2.eps1 = {4.0, 0.0};
    p2.eps2 = {6.0, 0.0};
    p2.phi1 = 0.5;
    const MatrixFamily f1 = fig1_family(0.0), f2 = to_family(p2);
    MatrixFamily f;
    f.h0 = ComplexMatrix(4);
    f.h1 = ComplexMatrix(4);
    f.a = ComplexMatrix::zero(4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            f.h0(i, j) = f1.h0(i, j);
            f.h1(i, j) = f1.h1(i, j);
            f.h0(i + 2, j + 2) = f2.h0(i, j);
            f.h1(i + 2, j + 2) = f2.h1(i, j);
        }
    const EPLocation ep = ep_refine(f, kFig1EP);
    CHECK(sheet_swap_check(f, ep));

    LoopSpec spec;
    spec.center = ep.lambda_c;
    spec.radius = 0.1;
    spec.steps = 1024;
    spec.loops = 1;
    const MonodromyResult r = encircle(f, spec);
    // labels 0,1 (ordered by Re at the start) belong to the fig1 block here
    CHECK(r.permutation[0] == 1);
    CHECK(r.permutation[1] == 0);
    CHECK(r.permutation[2] == 2);
    CHECK(r.permutation[3] == 3);
    CHECK(std::abs(std::abs(r.phases[2]) - 1.0) < 1e-6);
    CHECK(std::abs(r.phases[2] - 1.0) < 1e-2);
    CHECK(std::abs(r.phases[3] - 1.0) < 1e-2);
}

TEST_CASE("loops through a coalescence are rejected") {
    // circle passing exactly through the real-axis EP of mu = tan(0.4)
    const double lam_ep = 0.5 / std::cos(0.4);
    LoopSpec spec;
    spec.center = Cx{lam_ep - 0.05, 0.0};
    spec.radius = 0.05;
    spec.steps = 256;
    spec.loops = 1;
    CHECK_THROWS_AS(encircle(fig1_family(std::tan(0.4)), spec), LoopThroughEP);
}

TEST_CASE("loop spec validation") {
    LoopSpec spec;
    spec.center = Cx{0, 0};
    spec.radius = -1.0;
    spec.steps = 128;
    CHECK_THROWS_AS(spec.validate(), InvalidInput);
    spec.radius = 0.1;
    spec.steps = 32;
    CHECK_THROWS_AS(spec.validate(), InvalidInput);
}
