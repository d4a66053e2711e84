#include "permafinetti/multilinear.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

#include "permafinetti/errors.hpp"

namespace permafinetti {

void check_bitmask_cap(std::size_t n_vars, const Caps& caps) {
    const int cap = std::min(caps.bitmask_vars, 30);
    if (static_cast<int>(n_vars) > cap) {
        const double mib =
            static_cast<double>(sizeof(Complex)) * std::ldexp(1.0, static_cast<int>(n_vars)) /
            (1024.0 * 1024.0);
        std::ostringstream msg;
        msg << "n=" << n_vars << " exceeds the subset-table cap " << cap
            << ": a 2^" << n_vars << " coefficient table needs " << mib << " MiB";
        throw resource_limit_error(msg.str());
    }
}

MultilinearPoly::MultilinearPoly(int n_vars)
    : n_vars_(n_vars), coeffs_(std::size_t{1} << n_vars, Complex{}) {
    if (n_vars < 0 || n_vars > 30) {
        throw std::invalid_argument("multilinear polynomial supports 0..30 variables");
    }
}

MultilinearPoly MultilinearPoly::one(int n_vars) {
    MultilinearPoly p(n_vars);
    p.coeffs_[0] = 1.0;
    return p;
}

MultilinearPoly MultilinearPoly::affine(int n_vars, Complex c, std::span<const Complex> linear) {
    if (linear.size() != static_cast<std::size_t>(n_vars)) {
        throw std::invalid_argument("affine form has wrong number of coefficients");
    }
    MultilinearPoly p(n_vars);
    p.coeffs_[0] = c;
    for (int k = 0; k < n_vars; ++k) p.coeffs_[std::uint32_t{1} << k] = linear[k];
    return p;
}

MultilinearPoly& MultilinearPoly::operator+=(const MultilinearPoly& other) {
    if (other.n_vars_ != n_vars_) throw std::invalid_argument("variable count mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

MultilinearPoly& MultilinearPoly::operator-=(const MultilinearPoly& other) {
    if (other.n_vars_ != n_vars_) throw std::invalid_argument("variable count mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

void MultilinearPoly::scale(Complex factor) {
    for (Complex& c : coeffs_) c *= factor;
}

void MultilinearPoly::mul_affine(Complex c, std::span<const Complex> linear) {
    if (linear.size() != static_cast<std::size_t>(n_vars_)) {
        throw std::invalid_argument("affine form has wrong number of coefficients");
    }
    // Descending masks: coeff[S \ {k}] has a smaller index than S, so the
    // in-place update never reads an already-updated slot.
    for (std::size_t s = coeffs_.size(); s-- > 0;) {
        Complex v = c * coeffs_[s];
        std::uint32_t rest = static_cast<std::uint32_t>(s);
        while (rest != 0) {
            const int k = std::countr_zero(rest);
            const std::uint32_t bit = std::uint32_t{1} << k;
            rest ^= bit;
            const Complex b = linear[k];
            if (b != Complex{}) v += b * coeffs_[s ^ bit];
        }
        coeffs_[s] = v;
    }
}

MultilinearPoly MultilinearPoly::operator*(const MultilinearPoly& other) const {
    if (other.n_vars_ != n_vars_) throw std::invalid_argument("variable count mismatch");
    MultilinearPoly out(n_vars_);
    const std::uint32_t full = full_mask();
    for (std::uint32_t t = 0; t <= full; ++t) {
        const Complex ct = coeffs_[t];
        if (ct == Complex{}) continue;
        const std::uint32_t comp = full ^ t;
        // All masks disjoint from t, descending submask walk of comp.
        std::uint32_t u = comp;
        while (true) {
            const Complex cu = other.coeffs_[u];
            if (cu != Complex{}) out.coeffs_[t | u] += ct * cu;
            if (u == 0) break;
            u = (u - 1) & comp;
        }
    }
    return out;
}

Complex MultilinearPoly::top_coeff_with(const MultilinearPoly& other) const {
    if (other.n_vars_ != n_vars_) throw std::invalid_argument("variable count mismatch");
    const std::uint32_t full = full_mask();
    Complex acc{};
    for (std::uint32_t s = 0; s <= full; ++s) {
        const Complex cs = coeffs_[s];
        if (cs != Complex{}) acc += cs * other.coeffs_[full ^ s];
    }
    return acc;
}

bool MultilinearPoly::is_zero(double tol) const {
    for (const Complex& c : coeffs_) {
        if (std::abs(c) > tol) return false;
    }
    return true;
}

MultilinearPoly ml_affine_product(std::span<const AffineForm> forms, const Caps& caps) {
    if (forms.empty()) throw std::invalid_argument("need at least one affine form");
    const std::size_t n_vars = forms.front().linear.size();
    for (const AffineForm& form : forms) {
        if (form.linear.size() != n_vars) {
            throw std::invalid_argument("affine forms disagree on the number of variables");
        }
    }
    check_bitmask_cap(n_vars, caps);
    MultilinearPoly p = MultilinearPoly::one(static_cast<int>(n_vars));
    for (const AffineForm& form : forms) p.mul_affine(form.constant, form.linear);
    return p;
}

}  // namespace permafinetti
