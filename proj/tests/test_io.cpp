#include <doctest.h>

#include <complex>
#include <string>

#include "permafinetti/complex_matrix.hpp"
#include "permafinetti/caps.hpp"
#include "permafinetti/definetti.hpp"
#include "permafinetti/signed_measure.hpp"

using namespace permafinetti;

TEST_CASE("matrix JSON round trip") {
    const ComplexMatrix z{{{Complex{1, 0}, Complex{0, 1}},
                           {Complex{-0.25, 0.5}, Complex{0, -1}},
                           {Complex{0.125, 0}, Complex{1, 1}}}};
    const ComplexMatrix back = matrix_from_json(matrix_to_json(z));
    REQUIRE(back.rows() == 3);
    REQUIRE(back.cols() == 2);
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t k = 0; k < 2; ++k) REQUIRE(back(j, k) == z(j, k));
    }
}

TEST_CASE("matrix JSON validation") {
    CHECK_THROWS(matrix_from_json(R"({"N":2,"n":2,"entries":[[{"re":1,"im":0}]]})"));
    CHECK_THROWS(matrix_from_json(R"({"N":1,"n":2,"entries":[[{"re":1,"im":0},{"re":0,"im":0}]]})"));
    CHECK_THROWS(matrix_from_json("not json at all"));
}

TEST_CASE("complex literal parsing") {
    CHECK(parse_complex("1.5+2i") == Complex{1.5, 2.0});
    CHECK(parse_complex("-3") == Complex{-3.0, 0.0});
    CHECK(parse_complex("0.25i") == Complex{0.0, 0.25});
    CHECK(parse_complex("-i") == Complex{0.0, -1.0});
    CHECK(parse_complex("2e-3-4i") == Complex{2e-3, -4.0});
    CHECK(parse_complex(" 1 + 1i ") == Complex{1.0, 1.0});
    CHECK_THROWS(parse_complex("1+2"));
    CHECK_THROWS(parse_complex(""));
}

TEST_CASE("matrix CSV parsing") {
    const std::string csv = "1+1i, -1-1i\n0.5, 0.25i\n1, 0\n";
    const ComplexMatrix z = matrix_from_csv(csv);
    REQUIRE(z.rows() == 3);
    REQUIRE(z.cols() == 2);
    CHECK(z(0, 0) == Complex{1, 1});
    CHECK(z(0, 1) == Complex{-1, -1});
    CHECK(z(1, 1) == Complex{0, 0.25});
    CHECK_THROWS(matrix_from_csv("1, 2\n3\n"));
    CHECK_THROWS(matrix_from_csv(""));
}

TEST_CASE("model JSON round trip, normalization and rejection") {
    const std::string text = R"({"d":2,"N":3,"components":[
        {"weight":0.5,"urn":[2,1]},
        {"weight":0.5,"iid":[0.25,0.75]}]})";
    const ExchangeableModel model = model_from_json(text);
    CHECK(model.alphabet() == 2);
    CHECK(model.length() == 3);
    REQUIRE(model.components().size() == 2);

    const ExchangeableModel back = model_from_json(model_to_json(model));
    CHECK(back.components()[0].weight == doctest::Approx(0.5));

    // weights within 1e-9 of 1 are normalized
    const std::string slightly_off = R"({"d":2,"N":2,"components":[
        {"weight":0.5000000001,"urn":[1,1]},
        {"weight":0.5,"iid":[0.5,0.5]}]})";
    const ExchangeableModel normalized = model_from_json(slightly_off);
    double sum = 0.0;
    for (const auto& component : normalized.components()) sum += component.weight;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

    // weights far from 1 are rejected
    CHECK_THROWS(model_from_json(R"({"d":2,"N":2,"components":[{"weight":0.7,"urn":[1,1]}]})"));
    // urn counts must sum to N
    CHECK_THROWS(model_from_json(R"({"d":2,"N":3,"components":[{"weight":1.0,"urn":[1,1]}]})"));
    // component must be urn or iid
    CHECK_THROWS(model_from_json(R"({"d":2,"N":2,"components":[{"weight":1.0}]})"));
}

TEST_CASE("measure JSON export carries shape, legend and values") {
    DenseSignedMeasure r(2, 2);
    r[r.encode(std::vector<int>{0, 1})] = 0.5;
    r[r.encode(std::vector<int>{1, 0})] = -0.25;
    const std::string text = measure_to_json(r);
    CHECK(text.find("\"d\":2") != std::string::npos);
    CHECK(text.find("\"n\":2") != std::string::npos);
    CHECK(text.find("index_legend") != std::string::npos);
    CHECK(text.find("most significant") != std::string::npos);
    CHECK(text.find("0.5") != std::string::npos);
    CHECK(text.find("-0.25") != std::string::npos);
}

TEST_CASE("caps parsing") {
    const Caps caps = parse_caps("bitmask=20,naive=5e6,measure=2e5,rect=1e4");
    CHECK(caps.bitmask_vars == 20);
    CHECK(caps.naive_terms == doctest::Approx(5e6));
    CHECK(caps.measure_cells == doctest::Approx(2e5));
    CHECK(caps.rect_tuples == doctest::Approx(1e4));

    const Caps partial = parse_caps("bitmask=10");
    CHECK(partial.bitmask_vars == 10);
    CHECK(partial.naive_terms == doctest::Approx(1e8));

    CHECK_THROWS(parse_caps("bogus=3"));
    CHECK_THROWS(parse_caps("bitmask"));
    CHECK_THROWS(parse_caps("bitmask=-4"));
    CHECK_THROWS(parse_caps("bitmask=abc"));
}

TEST_CASE("matrix invariant violations are rejected") {
    CHECK_THROWS(ComplexMatrix(1, 2, {Complex{1, 0}, Complex{0, 1}}));  // n > N
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS(ComplexMatrix(2, 1, {Complex{inf, 0}, Complex{0, 1}}));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(ComplexMatrix(2, 1, {Complex{0, nan}, Complex{0, 1}}));
    CHECK(ComplexMatrix(2, 1, {Complex{1, 0}, Complex{0, 1}}).unit_bounded());
    CHECK_FALSE(ComplexMatrix(2, 1, {Complex{1.1, 0}, Complex{0, 1}}).unit_bounded());
}
