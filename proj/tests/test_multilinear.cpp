#include <doctest.h>

#include <complex>
#include <vector>

#include "permafinetti/errors.hpp"
#include "permafinetti/multilinear.hpp"
#include "permafinetti/rng.hpp"
#include "support/oracles.hpp"

using permafinetti::AffineForm;
using permafinetti::Complex;
using permafinetti::MultilinearPoly;
using permafinetti::TrialRng;

namespace {
const Complex I{0.0, 1.0};

MultilinearPoly random_poly(int n_vars, TrialRng& rng) {
    MultilinearPoly p(n_vars);
    for (std::uint32_t s = 0; s <= p.full_mask(); ++s) p.coeff(s) = rng.unit_disk();
    return p;
}
}  // namespace

TEST_CASE("affine product matches trivial expansions") {
    // (1 + x1)(1 + x2)
    std::vector<AffineForm> forms = {
        {Complex{1.0, 0.0}, {Complex{1.0, 0.0}, Complex{}}},
        {Complex{1.0, 0.0}, {Complex{}, Complex{1.0, 0.0}}},
    };
    const MultilinearPoly p = ml_affine_product(forms);
    CHECK(p.coeff(0b00) == Complex{1.0, 0.0});
    CHECK(p.coeff(0b01) == Complex{1.0, 0.0});
    CHECK(p.coeff(0b10) == Complex{1.0, 0.0});
    CHECK(p.coeff(0b11) == Complex{1.0, 0.0});

    // single factor 1 + 3 x1 over two variables
    std::vector<AffineForm> single = {{Complex{1.0, 0.0}, {Complex{3.0, 0.0}, Complex{}}}};
    const MultilinearPoly q = ml_affine_product(single);
    CHECK(q.coeff(0b00) == Complex{1.0, 0.0});
    CHECK(q.coeff(0b01) == Complex{3.0, 0.0});
    CHECK(q.coeff(0b10) == Complex{});
    CHECK(q.coeff(0b11) == Complex{});
}

TEST_CASE("affine product agrees with symbolic expansion on the 4x2 matrix") {
    const std::vector<std::vector<Complex>> rows = {
        {Complex{1, 0}, I}, {Complex{-1, 0}, -I}, {Complex{1, 0}, I}, {Complex{-1, 0}, -I}};

    std::vector<AffineForm> forms;
    auto symbolic = oracle::SymbolicPoly::one(2);
    for (const auto& row : rows) {
        forms.push_back({Complex{1.0, 0.0}, row});
        symbolic.mul_affine_reduced(Complex{1.0, 0.0}, row);
    }
    const MultilinearPoly p = ml_affine_product(forms);
    for (unsigned mask = 0; mask < 4; ++mask) {
        CAPTURE(mask);
        CHECK(std::abs(p.coeff(mask) - symbolic.coeff_mask(mask)) < 1e-12);
    }
    CHECK(std::abs(p.coeff(0b11) - Complex{0.0, -4.0}) < 1e-12);
}

TEST_CASE("random affine products match the symbolic oracle") {
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        TrialRng rng(20240601, trial);
        const int n_vars = rng.uniform_int(1, 5);
        const int n_forms = rng.uniform_int(1, 6);
        std::vector<AffineForm> forms;
        auto symbolic = oracle::SymbolicPoly::one(n_vars);
        for (int f = 0; f < n_forms; ++f) {
            AffineForm form;
            form.constant = rng.unit_disk();
            form.linear.resize(n_vars);
            for (Complex& c : form.linear) c = rng.unit_disk();
            symbolic.mul_affine_reduced(form.constant, form.linear);
            forms.push_back(std::move(form));
        }
        const MultilinearPoly p = ml_affine_product(forms);
        for (std::uint32_t mask = 0; mask <= p.full_mask(); ++mask) {
            CAPTURE(trial);
            CAPTURE(mask);
            REQUIRE(std::abs(p.coeff(mask) - symbolic.coeff_mask(mask)) < 1e-12);
        }
    }
}

TEST_CASE("quotient-ring product is commutative and associative") {
    for (std::uint64_t trial = 0; trial < 30; ++trial) {
        TrialRng rng(777, trial);
        const int n_vars = rng.uniform_int(1, 6);
        const MultilinearPoly a = random_poly(n_vars, rng);
        const MultilinearPoly b = random_poly(n_vars, rng);
        const MultilinearPoly c = random_poly(n_vars, rng);

        const MultilinearPoly ab = a * b;
        const MultilinearPoly ba = b * a;
        MultilinearPoly left = (a * b) * c;
        MultilinearPoly right = a * (b * c);
        for (std::uint32_t mask = 0; mask <= ab.full_mask(); ++mask) {
            REQUIRE(std::abs(ab.coeff(mask) - ba.coeff(mask)) < 1e-12);
            REQUIRE(std::abs(left.coeff(mask) - right.coeff(mask)) < 1e-12);
        }
    }
}

TEST_CASE("top_coeff_with matches the materialized product") {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        TrialRng rng(31337, trial);
        const int n_vars = rng.uniform_int(1, 6);
        const MultilinearPoly a = random_poly(n_vars, rng);
        const MultilinearPoly b = random_poly(n_vars, rng);
        const MultilinearPoly ab = a * b;
        REQUIRE(std::abs(a.top_coeff_with(b) - ab.coeff(ab.full_mask())) < 1e-12);
    }
}

TEST_CASE("mul_affine kills squared variables") {
    // (x1)(x1) = 0 in the quotient ring.
    MultilinearPoly p = MultilinearPoly::one(2);
    const std::vector<Complex> x1 = {Complex{1.0, 0.0}, Complex{}};
    p.mul_affine(Complex{}, x1);
    p.mul_affine(Complex{}, x1);
    CHECK(p.is_zero());
}

TEST_CASE("variable cap raises a resource error that names the memory need") {
    std::vector<AffineForm> forms = {{Complex{1.0, 0.0}, std::vector<Complex>(25, Complex{})}};
    CHECK_THROWS_AS(ml_affine_product(forms), permafinetti::resource_limit_error);
    try {
        ml_affine_product(forms);
    } catch (const permafinetti::resource_limit_error& err) {
        const std::string what = err.what();
        CHECK(what.find("2^25") != std::string::npos);
        CHECK(what.find("MiB") != std::string::npos);
    }
}
