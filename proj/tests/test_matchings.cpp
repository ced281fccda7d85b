#include "generators.hpp"

#include "polyton/covers.hpp"
#include "polyton/matchings.hpp"

#include <doctest.h>

using namespace polyton;
using namespace polyton::testing;

namespace {

// Minimum cover size over the {0, 1/2, 1} grid; no LP involved.
Rational grid_cover_oracle(const StepGraphon& w)
{
    const std::size_t k = w.size();
    std::vector<int> digit(k, 0);
    std::optional<Rational> best;
    while (true) {
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i)
            for (std::size_t j = i; j < k && ok; ++j)
                if (w.adjacent(i, j) && digit[i] + digit[j] < 2) ok = false;
        if (ok) {
            Rational size = 0;
            for (std::size_t i = 0; i < k; ++i) size += w.measure(i) * make_rational(digit[i], 2);
            if (!best || size < *best) best = size;
        }
        std::size_t pos = 0;
        while (pos < k && ++digit[pos] == 3) digit[pos++] = 0;
        if (pos == k) break;
    }
    return *best;
}

StepKernel kernel_on(const Partition& p, std::vector<std::vector<Rational>> rows)
{
    return StepKernel(p, p, RationalMatrix::from_rows(rows));
}

}  // namespace

TEST_CASE("is_matching examples")
{
    Rng rng(31);
    auto w = random_graphon(rng, 3);
    CHECK(is_matching(StepKernel::zero(Partition::uniform(2)), w));

    auto one = StepGraphon::constant(1);
    auto full = kernel_on(Partition::uniform(1), {{1}});
    auto v = is_matching(full, one);
    CHECK_FALSE(v);
    CHECK(v.reason.find("degree 2") != std::string::npos);

    auto zero = StepGraphon::constant(0);
    auto halfm = kernel_on(Partition::uniform(1), {{q(1, 2)}});
    auto s = is_matching(halfm, zero);
    CHECK_FALSE(s);
    CHECK(s.reason.find("support") != std::string::npos);

    auto neg = kernel_on(Partition::uniform(1), {{q(-1, 2)}});
    CHECK(is_matching(neg, one).reason.find("negative") != std::string::npos);
}

TEST_CASE("is_matching works across different partitions")
{
    // W supported only on the first half; m lives on thirds
    auto w = make_graphon({q(1, 2), q(1, 2)}, {{1, 0}, {0, 0}});
    auto inside = kernel_on(Partition({q(1, 3), q(2, 3)}), {{1, 0}, {0, 0}});
    CHECK(is_matching(inside, w));
    auto leaking = kernel_on(Partition({q(2, 3), q(1, 3)}), {{q(1, 2), 0}, {0, 0}});
    CHECK_FALSE(is_matching(leaking, w));
}

TEST_CASE("matching size and degree profile examples")
{
    CHECK(matching_size(StepKernel::zero(Partition::uniform(3))) == 0);
    CHECK(matching_size(kernel_on(Partition::uniform(1), {{q(1, 2)}})) == q(1, 2));
    auto m = kernel_on(Partition::uniform(2), {{0, 2}, {0, 0}});
    CHECK(matching_size(m) == q(1, 2));

    auto d = degree_profile(m);
    CHECK(d.row == std::vector<Rational>{1, 0});
    CHECK(d.col == std::vector<Rational>{0, 1});
    auto d1 = degree_profile(kernel_on(Partition::uniform(1), {{q(1, 2)}}));
    CHECK(d1.row == std::vector<Rational>{q(1, 2)});
    CHECK(d1.col == std::vector<Rational>{q(1, 2)});
    auto d0 = degree_profile(StepKernel::zero(Partition::uniform(2)));
    CHECK(d0.row == std::vector<Rational>{0, 0});
}

TEST_CASE("matching ratio examples")
{
    auto one = matching_ratio(StepGraphon::constant(1));
    CHECK(one.value == q(1, 2));
    CHECK(one.witness.size == q(1, 2));

    auto kb = make_graphon({q(1, 2), q(1, 2)}, {{0, 1}, {1, 0}});
    auto r = matching_ratio(kb);
    CHECK(r.value == q(1, 2));
    // symmetrized form of m = 2 on block (0,1)
    CHECK(r.witness.matching.value(0, 1) == 1);
    CHECK(r.witness.matching.value(1, 0) == 1);
    auto one_sided = StepKernel(kb.partition(), kb.partition(), RationalMatrix::from_rows({{0, 2}, {0, 0}}));
    CHECK(is_matching(one_sided, kb));
    CHECK(matching_size(one_sided) == r.value);
    CHECK(r.witness.degrees == std::vector<Rational>{1, 1});

    CHECK(matching_ratio(StepGraphon::constant(0)).value == 0);
}

TEST_CASE("matching ratio equals cover ratio and the grid oracle")
{
    Rng rng(32);
    for (int trial = 0; trial < 80; ++trial) {
        auto w = random_graphon(rng, uniform_index(rng, 1, 6), 0.5);
        auto m = matching_ratio(w);
        auto c = cover_ratio(w);
        const Rational oracle = grid_cover_oracle(w);
        CHECK(m.value == oracle);
        CHECK(c.value == oracle);
        CHECK(m.value <= q(1, 2));
        CHECK(sgn(m.value) >= 0);
        CHECK(is_matching(m.witness.matching, w));
        CHECK(m.witness.size == m.value);
        CHECK(m.witness.matching == m.witness.matching.transposed());
        for (const auto& d : m.witness.degrees) CHECK(d <= 1);
    }
}

TEST_CASE("matching ratio is monotone in the support")
{
    Rng rng(33);
    for (int trial = 0; trial < 40; ++trial) {
        auto w = random_graphon(rng, uniform_index(rng, 2, 5), 0.6);
        RationalMatrix v = w.values();
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = i; j < w.size(); ++j)
                if (rng() % 3 == 0) v(i, j) = v(j, i) = unit_rational(rng, {2, 3});
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j)
                if (w.adjacent(i, j) && sgn(v(i, j)) == 0) v(i, j) = 1;
        StepGraphon bigger(w.partition(), v);
        CHECK(matching_ratio(w).value <= matching_ratio(bigger).value);
    }
}

TEST_CASE("half graphon demo")
{
    for (std::size_t k : {1u, 2u, 5u, 8u}) {
        auto demo = half_graphon_demo(k);
        CHECK(is_matching(demo.matching, demo.graphon));
        CHECK(matching_size(demo.matching) == q(1, 2));
        Rational top = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) top = std::max(top, demo.matching.value(i, j));
        CHECK(top == make_rational(static_cast<long>(k), 2));
        CHECK(matching_ratio(demo.graphon).value == q(1, 2));
    }
}
