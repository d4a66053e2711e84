#include "permafinetti/signed_measure.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "permafinetti/errors.hpp"

namespace permafinetti {

namespace {

std::size_t checked_cells(int d, int n, const Caps& caps) {
    if (d < 1) throw std::invalid_argument("alphabet size must be positive");
    if (n < 1) throw std::invalid_argument("measure length must be positive");
    double cells = 1.0;
    for (int k = 0; k < n; ++k) cells *= static_cast<double>(d);
    if (!(cells <= caps.measure_cells)) {
        std::ostringstream msg;
        msg << "dense measure with d^n = " << cells << " cells exceeds the cap "
            << caps.measure_cells;
        throw resource_limit_error(msg.str());
    }
    std::size_t total = 1;
    for (int k = 0; k < n; ++k) total *= static_cast<std::size_t>(d);
    return total;
}

void check_same_shape(const DenseSignedMeasure& a, const DenseSignedMeasure& b) {
    if (a.alphabet() != b.alphabet() || a.length() != b.length()) {
        throw std::invalid_argument("measures have mismatched shapes");
    }
}

}  // namespace

DenseSignedMeasure::DenseSignedMeasure(int alphabet, int length, const Caps& caps)
    : d_(alphabet), n_(length), values_(checked_cells(alphabet, length, caps), 0.0) {}

DenseSignedMeasure DenseSignedMeasure::from_values(int alphabet, int length,
                                                   std::vector<double> values,
                                                   const Caps& caps) {
    DenseSignedMeasure r(alphabet, length, caps);
    if (values.size() != r.values_.size()) {
        throw std::invalid_argument("value count does not match d^n");
    }
    r.values_ = std::move(values);
    return r;
}

std::size_t DenseSignedMeasure::encode(std::span<const int> point) const {
    if (point.size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("point length mismatch");
    }
    std::size_t idx = 0;
    for (int x : point) {
        if (x < 0 || x >= d_) throw std::invalid_argument("symbol out of alphabet range");
        idx = idx * static_cast<std::size_t>(d_) + static_cast<std::size_t>(x);
    }
    return idx;
}

std::vector<int> DenseSignedMeasure::decode(std::size_t idx) const {
    std::vector<int> point(n_);
    for (int k = n_; k-- > 0;) {
        point[k] = static_cast<int>(idx % static_cast<std::size_t>(d_));
        idx /= static_cast<std::size_t>(d_);
    }
    return point;
}

double DenseSignedMeasure::total_mass() const {
    double mass = 0.0;
    for (double v : values_) mass += v;
    return mass;
}

DenseSignedMeasure& DenseSignedMeasure::operator+=(const DenseSignedMeasure& other) {
    check_same_shape(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

DenseSignedMeasure& DenseSignedMeasure::operator-=(const DenseSignedMeasure& other) {
    check_same_shape(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

void DenseSignedMeasure::scale(double factor) {
    for (double& v : values_) v *= factor;
}

double tv(const DenseSignedMeasure& r, const DenseSignedMeasure& r_prime) {
    check_same_shape(r, r_prime);
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t i = 0; i < r.cells(); ++i) {
        const double delta = r[i] - r_prime[i];
        if (delta > 0.0) {
            pos += delta;
        } else {
            neg -= delta;
        }
    }
    return std::max(pos, neg);
}

namespace {

// Depth-first rectangle sup: at each level, collapse the leading coordinate
// through every subset of the alphabet and recurse on the d^(m-1) tail.
class RectangleSup {
public:
    RectangleSup(int d, int length) : d_(d), scratch_(length) {
        // scratch_[k] holds a collapsed tensor over the last k coordinates.
        std::size_t cells = 1;
        for (int level = 0; level < length; ++level) {
            scratch_[level].assign(cells, 0.0);
            cells *= static_cast<std::size_t>(d);
        }
    }

    double run(const std::vector<double>& top) {
        best_ = 0.0;
        descend(top, scratch_.size());
        return best_;
    }

private:
    void descend(const std::vector<double>& tensor, std::size_t level) {
        if (level == 0) {
            best_ = std::max(best_, std::abs(tensor[0]));
            return;
        }
        auto& child = scratch_[level - 1];
        const std::size_t block = child.size();
        const unsigned subsets = 1u << d_;
        for (unsigned mask = 0; mask < subsets; ++mask) {
            std::fill(child.begin(), child.end(), 0.0);
            for (int s = 0; s < d_; ++s) {
                if (!(mask & (1u << s))) continue;
                const double* src = tensor.data() + static_cast<std::size_t>(s) * block;
                for (std::size_t i = 0; i < block; ++i) child[i] += src[i];
            }
            descend(child, level - 1);
        }
    }

    int d_;
    std::vector<std::vector<double>> scratch_;
    double best_ = 0.0;
};

}  // namespace

double pv(const DenseSignedMeasure& r, const DenseSignedMeasure& r_prime, const Caps& caps) {
    check_same_shape(r, r_prime);
    const int d = r.alphabet();
    const int n = r.length();
    double tuples = 1.0;
    for (int k = 0; k < n; ++k) tuples *= std::ldexp(1.0, d);
    if (!(tuples <= caps.rect_tuples)) {
        std::ostringstream msg;
        msg << "pv would enumerate (2^d)^n = " << tuples << " rectangles, above the cap "
            << caps.rect_tuples << "; consider the randomized sup_fn_lower instead";
        throw resource_limit_error(msg.str());
    }
    std::vector<double> diff(r.cells());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = r[i] - r_prime[i];
    RectangleSup sup(d, n);
    return sup.run(diff);
}

ProductFunction::ProductFunction(int alphabet, int length, std::vector<Complex> factors)
    : d_(alphabet), n_(length), factors_(std::move(factors)) {
    if (d_ < 1 || n_ < 1) throw std::invalid_argument("product function needs d, n >= 1");
    if (factors_.size() != static_cast<std::size_t>(d_) * static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("product function needs n*d factor values");
    }
    for (const Complex& v : factors_) {
        if (std::abs(v) > 1.0 + 1e-12) {
            throw std::invalid_argument("product function factors must have modulus <= 1");
        }
    }
}

Complex integral(const DenseSignedMeasure& r, const ProductFunction& f) {
    if (f.alphabet() != r.alphabet() || f.length() != r.length()) {
        throw std::invalid_argument("product function shape does not match measure");
    }
    const int d = r.alphabet();
    // Contract coordinates from the least significant (x_n) inward.
    std::vector<Complex> cur(r.values().begin(), r.values().end());
    for (int k = r.length(); k-- > 0;) {
        const std::size_t next_size = cur.size() / static_cast<std::size_t>(d);
        std::vector<Complex> next(next_size);
        for (std::size_t i = 0; i < next_size; ++i) {
            Complex acc{};
            for (int s = 0; s < d; ++s) {
                acc += cur[i * static_cast<std::size_t>(d) + s] * f.factor(k, s);
            }
            next[i] = acc;
        }
        cur = std::move(next);
    }
    return cur[0];
}

std::string measure_to_json(const DenseSignedMeasure& r) {
    nlohmann::ordered_json doc;
    doc["d"] = r.alphabet();
    doc["n"] = r.length();
    doc["index_legend"] =
        "values[i] is the mass of (x_1,...,x_n); i encodes the point in base d "
        "with x_1 as the most significant digit";
    doc["values"] = r.values();
    return doc.dump();
}

}  // namespace permafinetti
