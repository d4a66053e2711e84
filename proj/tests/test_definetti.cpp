#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "permafinetti/campaigns.hpp"
#include "permafinetti/definetti.hpp"
#include "permafinetti/errors.hpp"
#include "permafinetti/rng.hpp"
#include "permafinetti/signed_measure.hpp"
#include "support/oracles.hpp"

using namespace permafinetti;

namespace {

ExchangeableModel urn_model(std::vector<long long> counts) {
    long long total = 0;
    for (long long c : counts) total += c;
    const int d = static_cast<int>(counts.size());
    std::vector<ModelComponent> components;
    components.push_back({1.0, UrnComponent{std::move(counts)}});
    return ExchangeableModel(d, total, std::move(components));
}

ExchangeableModel iid_uniform(int d, long long length) {
    std::vector<ModelComponent> components;
    components.push_back({1.0, IidComponent{std::vector<double>(d, 1.0 / d)}});
    return ExchangeableModel(d, length, std::move(components));
}

void check_measure_close(const DenseSignedMeasure& got, const std::vector<double>& expected,
                         double tol = 1e-12) {
    REQUIRE(got.cells() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CAPTURE(i);
        REQUIRE(std::abs(got[i] - expected[i]) <= tol);
    }
}

}  // namespace

TEST_CASE("exact_law pinned examples") {
    const DenseSignedMeasure iid = exact_law(iid_uniform(2, 3), 2);
    check_measure_close(iid, {0.25, 0.25, 0.25, 0.25});

    // two red, one blue, drawn twice without replacement
    const DenseSignedMeasure urn = exact_law(urn_model({2, 1}), 2);
    check_measure_close(urn, {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0});

    // mixtures are averages of the component laws
    std::vector<ModelComponent> components;
    components.push_back({0.5, UrnComponent{{2, 1}}});
    components.push_back({0.5, IidComponent{{0.5, 0.5}}});
    const ExchangeableModel mix(2, 3, std::move(components));
    const DenseSignedMeasure mixed = exact_law(mix, 2);
    check_measure_close(mixed, {0.5 / 3 + 0.125, 0.5 / 3 + 0.125, 0.5 / 3 + 0.125, 0.125});

    CHECK_THROWS_AS(exact_law(urn_model({2, 1}), 4), std::domain_error);

    Caps caps;
    caps.measure_cells = 3;
    CHECK_THROWS_AS(exact_law(urn_model({2, 1}), 2, caps), resource_limit_error);
}

TEST_CASE("exact_law agrees with the sequence-enumeration oracle") {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        TrialRng rng(301, trial);
        const ExchangeableModel model = random_model(rng, 3, 6);
        const int n = rng.uniform_int(1, static_cast<int>(model.length()));
        const DenseSignedMeasure law = exact_law(model, n);
        const std::vector<double> reference = oracle::law_by_sequences(model, n);
        check_measure_close(law, reference, 1e-12);
        REQUIRE(std::abs(law.total_mass() - 1.0) <= 1e-10);
    }
}

TEST_CASE("q1 pinned examples") {
    // deterministic empirical measure of an urn
    const DenseSignedMeasure urn = q1(urn_model({2, 1}), 2);
    check_measure_close(urn, {4.0 / 9, 2.0 / 9, 2.0 / 9, 1.0 / 9});

    // single draw: empirical measure is a Dirac at X_1
    const DenseSignedMeasure dirac = q1(iid_uniform(2, 1), 2);
    check_measure_close(dirac, {0.5, 0.0, 0.0, 0.5});
}

TEST_CASE("q1 agrees with the sequence-enumeration oracle") {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        TrialRng rng(302, trial);
        const ExchangeableModel model = random_model(rng, 3, 6);
        const int n = rng.uniform_int(1, static_cast<int>(model.length()));
        check_measure_close(q1(model, n), oracle::q1_by_sequences(model, n), 1e-12);
    }
}

TEST_CASE("q2 equals the law exactly for the two-symbol urn at n = N = 2") {
    const ExchangeableModel model = urn_model({1, 1});
    const DenseSignedMeasure law = exact_law(model, 2);
    const DenseSignedMeasure second = q2(model, 2);
    check_measure_close(second, law.values(), 1e-12);
    check_measure_close(law, {0.0, 0.5, 0.5, 0.0});

    CHECK_THROWS_AS(q2(model, 1), std::domain_error);
}

TEST_CASE("q2 agrees with the sequence-enumeration oracle and has unit mass") {
    for (std::uint64_t trial = 0; trial < 15; ++trial) {
        TrialRng rng(303, trial);
        const ExchangeableModel model = random_model(rng, 3, 5);
        if (model.length() < 2) continue;
        const int n = rng.uniform_int(2, static_cast<int>(model.length()));
        const DenseSignedMeasure second = q2(model, n);
        check_measure_close(second, oracle::q2_by_sequences(model, n), 1e-11);
        REQUIRE(std::abs(second.total_mass() - 1.0) <= 1e-10);

        DenseSignedMeasure correction = second;
        correction -= q1(model, n);
        REQUIRE(std::abs(correction.total_mass()) <= 1e-12);
    }
}

TEST_CASE("tv and pv pinned examples") {
    const ExchangeableModel pair = urn_model({1, 1});
    const DenseSignedMeasure law2 = exact_law(pair, 2);
    const DenseSignedMeasure first2 = q1(pair, 2);
    CHECK(tv(law2, first2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pv(law2, first2) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(tv(law2, law2) == 0.0);
    CHECK(pv(law2, law2) == 0.0);

    const ExchangeableModel urn21 = urn_model({2, 1});
    const DenseSignedMeasure law = exact_law(urn21, 2);
    const DenseSignedMeasure first = q1(urn21, 2);
    CHECK(tv(law, first) == doctest::Approx(2.0 / 9).epsilon(1e-12));
    CHECK(pv(law, first) <= tv(law, first) + 1e-15);
}

TEST_CASE("pv stays below tv on random models") {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        TrialRng rng(304, trial);
        const ExchangeableModel model = random_model(rng, 3, 6);
        const int n = rng.uniform_int(1, static_cast<int>(model.length()));
        const DenseSignedMeasure law = exact_law(model, n);
        const DenseSignedMeasure first = q1(model, n);
        REQUIRE(pv(law, first) <= tv(law, first) + 1e-12);
    }
}

TEST_CASE("pv cap raises a resource error pointing at sup_fn_lower") {
    Caps caps;
    caps.rect_tuples = 10;
    const ExchangeableModel model = urn_model({2, 1});
    const DenseSignedMeasure law = exact_law(model, 2);
    const DenseSignedMeasure first = q1(model, 2);
    CHECK_THROWS_WITH_AS(pv(law, first, caps),
                         doctest::Contains("sup_fn_lower"), resource_limit_error);
}

TEST_CASE("integral against product functions") {
    const ExchangeableModel pair = urn_model({1, 1});
    const DenseSignedMeasure law = exact_law(pair, 2);
    const DenseSignedMeasure first = q1(pair, 2);

    const ProductFunction all_ones(2, 2, std::vector<Complex>(4, Complex{1.0, 0.0}));
    CHECK(std::abs(integral(law, all_ones) - Complex{1.0, 0.0}) < 1e-12);

    // f1 = f2 = (1, -1): the two colors always differ
    const ProductFunction signs(2, 2,
                                {Complex{1, 0}, Complex{-1, 0}, Complex{1, 0}, Complex{-1, 0}});
    CHECK(std::abs(integral(law, signs) - Complex{-1.0, 0.0}) < 1e-12);
    CHECK(std::abs(integral(first, signs)) < 1e-12);

    CHECK_THROWS_AS(integral(exact_law(pair, 1), signs), std::invalid_argument);
    CHECK_THROWS_AS(
        ProductFunction(2, 1, std::vector<Complex>{Complex{2.0, 0.0}, Complex{0.0, 0.0}}),
        std::invalid_argument);
}

TEST_CASE("sup_fn_lower finds the sign witness and stays monotone") {
    const ExchangeableModel pair = urn_model({1, 1});
    const DenseSignedMeasure law = exact_law(pair, 2);
    const DenseSignedMeasure first = q1(pair, 2);

    CHECK(sup_fn_lower(law, law, 100, 7) == 0.0);

    const double few = sup_fn_lower(law, first, 4, 7);
    const double more = sup_fn_lower(law, first, 400, 7);
    CHECK(few <= more);
    CHECK(more >= 1.0 - 1e-12);  // witness f1 = f2 = (1, -1)
    CHECK(more >= pv(law, first));
    // deterministic given (seed, trials)
    CHECK(sup_fn_lower(law, first, 400, 7) == more);
}

TEST_CASE("df_bounds pinned values") {
    const DfBounds b = df_bounds(2, 4, 2);
    CHECK(b.dm_exact == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(b.dm_quad == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(b.finite_s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.bobkov == doctest::Approx(8.0).epsilon(1e-12));
    REQUIRE(b.first_order.has_value());
    CHECK(*b.first_order == doctest::Approx(1.7605595419028843).epsilon(1e-12));

    const DfBounds c = df_bounds(2, 8, 2);
    REQUIRE(c.second_order.has_value());
    CHECK(*c.second_order == doctest::Approx(0.3925457701262568).epsilon(1e-12));

    CHECK(df_bounds(1, 9, 3).dm_exact == doctest::Approx(0.0));

    const DfBounds full = df_bounds(4, 4, 2);
    CHECK_FALSE(full.first_order.has_value());
    CHECK_FALSE(full.second_order.has_value());
    CHECK_THROWS_AS(df_bounds(5, 4, 2), std::domain_error);
}

TEST_CASE("permanent_bridge pinned examples") {
    const ProductFunction signs(2, 2,
                                {Complex{1, 0}, Complex{-1, 0}, Complex{1, 0}, Complex{-1, 0}});
    const std::vector<int> rb = {0, 1};
    CHECK(std::abs(permanent_bridge(rb, signs) - Complex{-1.0, 0.0}) < 1e-12);

    const ProductFunction all_ones(2, 2, std::vector<Complex>(4, Complex{1.0, 0.0}));
    CHECK(std::abs(permanent_bridge(rb, all_ones)) < 1e-12);
}

TEST_CASE("bridge identities against the exact integrals") {
    for (std::uint64_t trial = 0; trial < 12; ++trial) {
        TrialRng rng(305, trial);
        const ExchangeableModel model = random_model(rng, 2, 6);
        const int big_n = static_cast<int>(model.length());
        const int n = rng.uniform_int(2, big_n);
        const ProductFunction f =
            random_product_function(rng, model.alphabet(), n, trial % 2 == 0);

        const DenseSignedMeasure full = exact_law(model, big_n);
        Complex averaged_q1{};
        Complex averaged_q2{};
        for (std::size_t idx = 0; idx < full.cells(); ++idx) {
            if (full[idx] == 0.0) continue;
            const std::vector<int> seq = full.decode(idx);
            averaged_q1 += full[idx] * permanent_bridge(seq, f);
            averaged_q2 += full[idx] * permanent_bridge_h2(seq, f);
        }

        const DenseSignedMeasure law = exact_law(model, n);
        DenseSignedMeasure diff1 = law;
        diff1 -= q1(model, n);
        DenseSignedMeasure diff2 = law;
        diff2 -= q2(model, n);
        CAPTURE(trial);
        REQUIRE(std::abs(averaged_q1 - integral(diff1, f)) <= 1e-10);
        REQUIRE(std::abs(averaged_q2 - integral(diff2, f)) <= 1e-10);
    }
}

TEST_CASE("single-symbol alphabets collapse to point masses") {
    std::vector<ModelComponent> comps;
    comps.push_back({1.0, UrnComponent{{3}}});
    const ExchangeableModel model(1, 3, std::move(comps));
    const DenseSignedMeasure law = exact_law(model, 2);
    const DenseSignedMeasure first = q1(model, 2);
    const DenseSignedMeasure second = q2(model, 2);
    CHECK(law[0] == doctest::Approx(1.0));
    CHECK(first[0] == doctest::Approx(1.0));
    CHECK(second[0] == doctest::Approx(1.0));
    CHECK(tv(law, first) == 0.0);
    CHECK(pv(law, first) == 0.0);
    CHECK(sup_fn_lower(law, first, 10, 1) == 0.0);
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(ExchangeableModel(2, 3, {}), std::invalid_argument);

    std::vector<ModelComponent> bad_counts;
    bad_counts.push_back({1.0, UrnComponent{{1, 1}}});
    CHECK_THROWS_AS(ExchangeableModel(2, 3, std::move(bad_counts)), std::invalid_argument);

    std::vector<ModelComponent> bad_probs;
    bad_probs.push_back({1.0, IidComponent{{0.7, 0.7}}});
    CHECK_THROWS_AS(ExchangeableModel(2, 3, std::move(bad_probs)), std::invalid_argument);

    std::vector<ModelComponent> bad_weights;
    bad_weights.push_back({0.4, IidComponent{{0.5, 0.5}}});
    CHECK_THROWS_AS(ExchangeableModel(2, 3, std::move(bad_weights)), std::invalid_argument);
}
