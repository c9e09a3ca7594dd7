/*
   Copyright 2026 The pksim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#include <doctest.h>

#include <random>
#include <sstream>

#include "pksim/errors.hpp"
#include "pksim/lineage.hpp"
#include "pksim/population.hpp"
#include "pksim/textio.hpp"

using namespace pksim;

TEST_CASE("parent drops the last symbol") {
    CHECK(LineageIndex::from_word(1, "101").parent() == LineageIndex::from_word(1, "10"));
    CHECK(LineageIndex::from_word(3, "0").parent() == LineageIndex::root(3));
    CHECK_THROWS_AS(LineageIndex::root(1).parent(), RootHasNoParent);
}

TEST_CASE("children append 0 and 1") {
    auto [a, b] = LineageIndex::root(1).children();
    CHECK(a.word() == "0");
    CHECK(b.word() == "1");
    CHECK(a.line() == 1);
    auto [c, e] = LineageIndex::from_word(2, "10").children();
    CHECK(c == LineageIndex::from_word(2, "100"));
    CHECK(e == LineageIndex::from_word(2, "101"));
    CHECK(e.line() == 2);
}

TEST_CASE("children/parent round trip on random words") {
    std::mt19937_64 gen(7);
    for (int t = 0; t < 500; ++t) {
        const int len = int(gen() % 63);
        std::string w;
        for (int i = 0; i < len; ++i) w += char('0' + (gen() & 1));
        const auto idx = LineageIndex::from_word(1 + std::uint32_t(gen() % 9), w);
        CHECK(idx.word() == w);
        auto [a, b] = idx.children();
        CHECK(a.parent() == idx);
        CHECK(b.parent() == idx);
        CHECK(a < b);
    }
}

TEST_CASE("depth beyond 64 generations is rejected") {
    const auto deep = LineageIndex::from_word(1, std::string(64, '1'));
    CHECK_THROWS_AS(deep.children(), DepthExceeded);
}

TEST_CASE("index order: line, length, lexicographic") {
    CHECK(LineageIndex::root(1) < LineageIndex::root(2));
    CHECK(LineageIndex::from_word(1, "1") < LineageIndex::from_word(1, "00"));
    CHECK(LineageIndex::from_word(1, "01") < LineageIndex::from_word(1, "10"));
    CHECK(LineageIndex::from_word(2, "") < LineageIndex::from_word(2, "0"));
}

namespace {

CellRecord live(Point p, double birth = 0.0) { return CellRecord{p, birth, kInfinity}; }
CellRecord dead(double birth, double death) { return CellRecord{std::nullopt, birth, death}; }

} // namespace

TEST_CASE("state distance examples") {
    PopulationState a(2, 1.0), b(2, 1.0);
    a.set(LineageIndex::root(1), live({1.0, 2.0}));
    a.set(LineageIndex::root(2), live({0.0, 0.0}));
    b = a;
    CHECK(state_distance(a, b) == 0.0);

    PopulationState c = a;
    c.set(LineageIndex::root(2), dead(0.0, 0.5));
    CHECK(state_distance(a, c) == 1.0);

    PopulationState e = a;
    e.set(LineageIndex::root(1), live({1.3, 2.4}));
    CHECK(state_distance(a, e) == doctest::Approx(0.5).epsilon(1e-15));

    // an index absent from one side counts as dead there
    PopulationState f = a;
    f.set(LineageIndex::from_word(1, "0"), live({9.0, 9.0}, 0.2));
    CHECK(state_distance(a, f) == 1.0);

    // displacements are not capped
    PopulationState g = a;
    g.set(LineageIndex::root(1), live({4.0, 6.0}));
    CHECK(state_distance(a, g) == doctest::Approx(5.0));

    CHECK_THROWS_AS(state_distance(a, PopulationState(1, 1.0)), DimensionMismatch);
}

// With |x - dead| = 1 and uncapped displacements the triangle inequality can
// only hold when live positions are within distance 2 of each other, so the
// random triples are drawn from a box of diameter < 2.
TEST_CASE("state distance is a metric on random triples") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    auto random_state = [&] {
        PopulationState s(2, 1.0);
        for (std::uint32_t line = 1; line <= 4; ++line) {
            const auto roll = gen() % 3;
            if (roll == 0) continue;   // absent
            if (roll == 1)
                s.set(LineageIndex::root(line), dead(0.0, 0.5));
            else
                s.set(LineageIndex::root(line), live({u(gen), u(gen)}));
        }
        return s;
    };
    for (int t = 0; t < 2000; ++t) {
        const auto a = random_state(), b = random_state(), c = random_state();
        const double ab = state_distance(a, b), ba = state_distance(b, a);
        CHECK(ab == ba);
        CHECK(ab >= 0.0);
        CHECK(state_distance(a, a) == 0.0);
        CHECK(state_distance(a, c) <= ab + state_distance(b, c) + 1e-12);
    }
}

TEST_CASE("far apart positions break the triangle inequality through a dead state") {
    PopulationState a(1, 1.0), b(1, 1.0), c(1, 1.0);
    a.set(LineageIndex::root(1), live({0.0}));
    b.set(LineageIndex::root(1), dead(0.0, 0.5));
    c.set(LineageIndex::root(1), live({3.0}));
    CHECK(state_distance(a, c) == 3.0);
    CHECK(state_distance(a, b) + state_distance(b, c) == 2.0);
}

TEST_CASE("population records are validated") {
    PopulationState s(1, 1.0);
    CHECK_THROWS_AS(s.set(LineageIndex::root(1), CellRecord{Point{}, 1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(s.set(LineageIndex::root(1), CellRecord{Point{}, 2.0, kInfinity}),
                    InvalidArgument);
    CHECK_THROWS_AS(s.set(LineageIndex::root(1), CellRecord{Point{}, 0.0, 0.5}), InvalidArgument);
}

TEST_CASE("empirical measure and integrate") {
    PopulationState s(1, 1.0);
    for (std::uint32_t i = 1; i <= 3; ++i) s.set(LineageIndex::root(i), live({double(i)}));
    s.set(LineageIndex::root(4), dead(0.0, 0.5));
    const auto m = empirical(s, 1);
    CHECK(m.size() == 3);
    CHECK(m.total_mass() == 3.0);
    CHECK(integrate(m, [](const Point&) { return 1.0; }) == 3.0);

    PopulationState none(1, 1.0);
    none.set(LineageIndex::root(1), dead(0.0, 0.5));
    CHECK(empirical(none, 1).empty());
    CHECK(integrate(empirical(none, 1), [](const Point&) { return 1.0; }) == 0.0);

    PopulationState hundred(1, 0.0);
    for (std::uint32_t i = 1; i <= 100; ++i)
        hundred.set(LineageIndex::root(i), live({0.01 * i}));
    CHECK(empirical(hundred, 100).total_mass() == doctest::Approx(1.0).epsilon(1e-14));

    EmpiricalMeasure single(1, {Atom{{0.7}, 0.5}});
    CHECK(integrate(single, [](const Point& x) { return x[0] == 0.7 ? 2.0 : 0.0; }) == 1.0);
}

TEST_CASE("mass times n0 counts live cells exactly") {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 50; ++t) {
        const std::uint64_t n0 = 1 + gen() % 500;
        PopulationState s(1, 1.0);
        std::size_t alive = 0;
        for (std::uint32_t i = 1; i <= 300; ++i) {
            if (gen() % 4 == 0) {
                s.set(LineageIndex::root(i), dead(0.0, 0.5));
            } else {
                s.set(LineageIndex::root(i), live({0.0}));
                ++alive;
            }
        }
        const double mass = integrate(empirical(s, n0), [](const Point&) { return 1.0; });
        CHECK(std::llround(mass * double(n0)) == std::int64_t(alive));
        CHECK(s.live_count() == alive);
    }
}

TEST_CASE("population text format round trips") {
    PopulationState s(2, 0.75);
    s.set(LineageIndex::root(1), live({0.1, 1.0 / 3.0}));
    s.set(LineageIndex::from_word(1, "0"), dead(0.25, 0.5));
    s.set(LineageIndex::from_word(2, "1101"), live({-7.25e-3, 9.875}, 0.125));
    std::stringstream ss;
    write_population(ss, s);
    const auto back = read_population(ss, 2, 0.75);
    REQUIRE(back.cells().size() == 3);
    CHECK(state_distance(s, back) == 0.0);
    for (const auto& [idx, rec] : s.cells()) {
        const auto* r = back.find(idx);
        REQUIRE(r);
        CHECK(r->birth_time == rec.birth_time);
        CHECK(r->death_time == rec.death_time);
        CHECK(r->position == rec.position);
    }

    EmpiricalMeasure m(1, {Atom{{0.1}, 0.25}, Atom{{2.0 / 3.0}, 1e-3}});
    std::stringstream ms;
    write_measure(ms, m);
    const auto mb = read_measure(ms, 1);
    REQUIRE(mb.size() == 2);
    CHECK(mb.atoms()[1].position[0] == 2.0 / 3.0);
    CHECK(mb.atoms()[1].weight == 1e-3);

    std::stringstream bad("1 0 0 0 inf zz\n");
    CHECK_THROWS_AS(read_population(bad, 1, 0.0), ParseError);
}
