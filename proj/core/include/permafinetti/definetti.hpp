#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "permafinetti/caps.hpp"
#include "permafinetti/signed_measure.hpp"

namespace permafinetti {

// Sampling without replacement from a fixed pool of N symbols with the given
// per-symbol counts (counts sum to N).
struct UrnComponent {
    std::vector<long long> counts;
};

// Independent draws from a fixed distribution on the alphabet.
struct IidComponent {
    std::vector<double> probs;
};

struct ModelComponent {
    double weight;
    std::variant<UrnComponent, IidComponent> kind;
};

// A finite-alphabet exchangeable sequence law of length N: a mixture of urn
// and i.i.d. components. Exchangeability holds by construction since every
// component law is symmetric.
class ExchangeableModel {
public:
    ExchangeableModel(int alphabet, long long length, std::vector<ModelComponent> components);

    int alphabet() const { return d_; }
    long long length() const { return big_n_; }
    const std::vector<ModelComponent>& components() const { return components_; }

private:
    int d_;
    long long big_n_;
    std::vector<ModelComponent> components_;
};

// {"d":int,"N":int,"components":[{"weight":f,"urn":[int,..]}|{"weight":f,"iid":[f,..]}]}
// Weights (and iid probabilities) off by at most 1e-9 are renormalized;
// larger discrepancies are rejected.
ExchangeableModel model_from_json(const std::string& text);
std::string model_to_json(const ExchangeableModel& model);
ExchangeableModel load_model_file(const std::string& path);

// Exact marginal law of (X_1, ..., X_n) under the model. 1 <= n <= N and
// d^n within caps.measure_cells.
DenseSignedMeasure exact_law(const ExchangeableModel& model, int n, const Caps& caps = {});

// Q_1: expectation of the n-th tensor power of the empirical measure,
// computed composition-wise (urn components have a deterministic empirical
// measure; i.i.d. components weight compositions multinomially).
DenseSignedMeasure q1(const ExchangeableModel& model, int n, const Caps& caps = {});

// Q_2: Q_1 minus the pair-correction term
// (1/(N(N-1))) sum_{|K|=2} sum_j E[tensor with (delta_{X_j} - emp) on K and
// emp elsewhere]. Requires n >= 2 (whence N >= 2).
DenseSignedMeasure q2(const ExchangeableModel& model, int n, const Caps& caps = {});

// Randomized LOWER bound on sup over tensor-product f (factors bounded by 1)
// of |integral f d(R - R')|: the max of |integral| over `trials` random
// product functions (unimodular phases and +-1 signs, alternating), plus all
// indicator rectangles whenever the rectangle cap permits their enumeration.
// Deterministic given (seed, trials) and monotone non-decreasing in trials.
double sup_fn_lower(const DenseSignedMeasure& r, const DenseSignedMeasure& r_prime,
                    long long trials, std::uint64_t seed, const Caps& caps = {});

struct DfBounds {
    double dm_exact;    // 1 - N!/((N-n)! N^n)
    double dm_quad;     // n(n-1)/(2N)
    double finite_s;    // d n / N
    double bobkov;      // 16 n / N
    // Present only when n/N < 1.
    std::optional<double> first_order;   // n/N + 2.12 (n/N)^(3/2)/(1-n/N)^(3/4)
    std::optional<double> second_order;  // sqrt(3)(n/N)^(3/2) + 2.27 (n/N)^2/(1-n/N)^(3/4)
};

DfBounds df_bounds(std::size_t n, std::size_t big_n, std::size_t d);

// Pointwise integrand of the permanent representation of
// integral f d(P - Q_1): builds F_{j,k} = f_k(x_j) and returns
// normalized-Per(F) - prod_k (column mean of F).
Complex permanent_bridge(std::span<const int> sequence, const ProductFunction& f,
                         const Caps& caps = {});

// Second-order variant: normalized-Per(F) - H_2(F). Averaged over sequences
// it reproduces integral f d(P - Q_2). Requires f length >= 2.
Complex permanent_bridge_h2(std::span<const int> sequence, const ProductFunction& f,
                            const Caps& caps = {});

}  // namespace permafinetti
