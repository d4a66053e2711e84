#include "permafinetti/definetti.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "permafinetti/expansion.hpp"
#include "permafinetti/permanent.hpp"
#include "permafinetti/rng.hpp"

namespace permafinetti {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kNormalizeTol = 1e-9;

// An empirical composition of the N draws together with its probability
// under a model component. Urn components have exactly one composition (the
// counts themselves); i.i.d. components weight compositions multinomially.
struct WeightedComposition {
    std::vector<long long> counts;
    double prob;
};

double multinomial_weight(long long total, const std::vector<long long>& counts,
                          const std::vector<double>& probs) {
    // multinomial(N; c) * prod_s p_s^{c_s}, accumulated in factored form.
    double weight = 1.0;
    long long remaining = total;
    for (std::size_t s = 0; s < counts.size(); ++s) {
        const long long c = counts[s];
        if (c == 0) continue;
        if (probs[s] == 0.0) return 0.0;
        // C(remaining, c) * p^c
        for (long long i = 1; i <= c; ++i) {
            weight *= static_cast<double>(remaining - c + i) / static_cast<double>(i);
            weight *= probs[s];
        }
        remaining -= c;
    }
    return weight;
}

void enumerate_compositions(long long total, int d,
                            const std::function<void(const std::vector<long long>&)>& emit) {
    std::vector<long long> counts(d, 0);
    auto recurse = [&](auto&& self, int s, long long left) -> void {
        if (s == d - 1) {
            counts[s] = left;
            emit(counts);
            return;
        }
        for (long long c = 0; c <= left; ++c) {
            counts[s] = c;
            self(self, s + 1, left - c);
        }
    };
    recurse(recurse, 0, total);
}

std::vector<WeightedComposition> component_compositions(const ExchangeableModel& model,
                                                        const ModelComponent& component) {
    std::vector<WeightedComposition> out;
    if (const auto* urn = std::get_if<UrnComponent>(&component.kind)) {
        out.push_back({urn->counts, 1.0});
        return out;
    }
    const auto& iid = std::get<IidComponent>(component.kind);
    enumerate_compositions(model.length(), model.alphabet(),
                           [&](const std::vector<long long>& counts) {
                               const double w =
                                   multinomial_weight(model.length(), counts, iid.probs);
                               if (w > 0.0) out.push_back({counts, w});
                           });
    return out;
}

// q^(x n) as a dense tensor, built coordinate by coordinate.
std::vector<double> tensor_power(const std::vector<double>& q, int n) {
    std::vector<double> cur{1.0};
    const std::size_t d = q.size();
    for (int k = 0; k < n; ++k) {
        std::vector<double> next(cur.size() * d);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            for (std::size_t s = 0; s < d; ++s) next[i * d + s] = cur[i] * q[s];
        }
        cur = std::move(next);
    }
    return cur;
}

// Tensor whose k-th factor is `special` on the two slots k1 < k2 and `base`
// elsewhere, accumulated into `out` with coefficient `coeff`.
void add_pair_tensor(std::vector<double>& out, double coeff, const std::vector<double>& base,
                     const std::vector<double>& special, int n, int k1, int k2) {
    const std::size_t d = base.size();
    std::vector<double> cur{coeff};
    for (int k = 0; k < n; ++k) {
        const std::vector<double>& factor = (k == k1 || k == k2) ? special : base;
        std::vector<double> next(cur.size() * d);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            for (std::size_t s = 0; s < d; ++s) next[i * d + s] = cur[i] * factor[s];
        }
        cur = std::move(next);
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += cur[i];
}

}  // namespace

ExchangeableModel::ExchangeableModel(int alphabet, long long length,
                                     std::vector<ModelComponent> components)
    : d_(alphabet), big_n_(length), components_(std::move(components)) {
    if (d_ < 1) throw std::invalid_argument("alphabet size must be positive");
    if (big_n_ < 1) throw std::invalid_argument("sequence length must be positive");
    if (components_.empty()) throw std::invalid_argument("model needs at least one component");

    double weight_sum = 0.0;
    for (const ModelComponent& component : components_) {
        if (component.weight < 0.0 || component.weight > 1.0) {
            throw std::invalid_argument("component weights must lie in [0, 1]");
        }
        weight_sum += component.weight;
        if (const auto* urn = std::get_if<UrnComponent>(&component.kind)) {
            if (urn->counts.size() != static_cast<std::size_t>(d_)) {
                throw std::invalid_argument("urn counts must have d entries");
            }
            long long total = 0;
            for (long long c : urn->counts) {
                if (c < 0) throw std::invalid_argument("urn counts must be nonnegative");
                total += c;
            }
            if (total != big_n_) throw std::invalid_argument("urn counts must sum to N");
        } else {
            const auto& iid = std::get<IidComponent>(component.kind);
            if (iid.probs.size() != static_cast<std::size_t>(d_)) {
                throw std::invalid_argument("iid probabilities must have d entries");
            }
            double total = 0.0;
            for (double p : iid.probs) {
                if (p < 0.0) throw std::invalid_argument("iid probabilities must be nonnegative");
                total += p;
            }
            if (std::abs(total - 1.0) > kSumTol) {
                throw std::invalid_argument("iid probabilities must sum to 1");
            }
        }
    }
    if (std::abs(weight_sum - 1.0) > kSumTol) {
        throw std::invalid_argument("component weights must sum to 1");
    }
}

ExchangeableModel model_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    const int d = doc.at("d").get<int>();
    const long long length = doc.at("N").get<long long>();

    std::vector<ModelComponent> components;
    double weight_sum = 0.0;
    for (const auto& item : doc.at("components")) {
        ModelComponent component;
        component.weight = item.at("weight").get<double>();
        weight_sum += component.weight;
        if (item.contains("urn")) {
            component.kind = UrnComponent{item.at("urn").get<std::vector<long long>>()};
        } else if (item.contains("iid")) {
            IidComponent iid{item.at("iid").get<std::vector<double>>()};
            double total = std::accumulate(iid.probs.begin(), iid.probs.end(), 0.0);
            if (std::abs(total - 1.0) > kNormalizeTol) {
                throw std::invalid_argument("iid probabilities must sum to 1 (within 1e-9)");
            }
            if (total > 0.0) {
                for (double& p : iid.probs) p /= total;
            }
            component.kind = std::move(iid);
        } else {
            throw std::invalid_argument("component must have either 'urn' or 'iid'");
        }
        components.push_back(std::move(component));
    }
    if (std::abs(weight_sum - 1.0) > kNormalizeTol) {
        throw std::invalid_argument("component weights must sum to 1 (within 1e-9)");
    }
    for (ModelComponent& component : components) component.weight /= weight_sum;
    return ExchangeableModel(d, length, std::move(components));
}

std::string model_to_json(const ExchangeableModel& model) {
    nlohmann::ordered_json doc;
    doc["d"] = model.alphabet();
    doc["N"] = model.length();
    nlohmann::ordered_json components = nlohmann::ordered_json::array();
    for (const ModelComponent& component : model.components()) {
        nlohmann::ordered_json item;
        item["weight"] = component.weight;
        if (const auto* urn = std::get_if<UrnComponent>(&component.kind)) {
            item["urn"] = urn->counts;
        } else {
            item["iid"] = std::get<IidComponent>(component.kind).probs;
        }
        components.push_back(std::move(item));
    }
    doc["components"] = std::move(components);
    return doc.dump();
}

ExchangeableModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return model_from_json(buffer.str());
}

DenseSignedMeasure exact_law(const ExchangeableModel& model, int n, const Caps& caps) {
    if (n < 1 || n > model.length()) throw std::domain_error("exact_law requires 1 <= n <= N");
    const int d = model.alphabet();
    DenseSignedMeasure law(d, n, caps);
    const double big_n = static_cast<double>(model.length());

    std::vector<int> point(n);
    std::vector<long long> used(d);
    for (const ModelComponent& component : model.components()) {
        if (component.weight == 0.0) continue;
        if (const auto* urn = std::get_if<UrnComponent>(&component.kind)) {
            for (std::size_t idx = 0; idx < law.cells(); ++idx) {
                // Sequential draw probabilities without replacement.
                std::size_t rest = idx;
                for (int k = n; k-- > 0;) {
                    point[k] = static_cast<int>(rest % d);
                    rest /= d;
                }
                std::fill(used.begin(), used.end(), 0);
                double p = 1.0;
                for (int k = 0; k < n && p != 0.0; ++k) {
                    const int s = point[k];
                    const long long avail = urn->counts[s] - used[s];
                    if (avail <= 0) {
                        p = 0.0;
                        break;
                    }
                    p *= static_cast<double>(avail) / (big_n - k);
                    ++used[s];
                }
                law[idx] += component.weight * p;
            }
        } else {
            const auto& iid = std::get<IidComponent>(component.kind);
            const std::vector<double> tensor = tensor_power(iid.probs, n);
            for (std::size_t idx = 0; idx < law.cells(); ++idx) {
                law[idx] += component.weight * tensor[idx];
            }
        }
    }
    return law;
}

DenseSignedMeasure q1(const ExchangeableModel& model, int n, const Caps& caps) {
    // Unlike the exact law, the averaged empirical tensor power is defined
    // for every n >= 1, including n > N.
    if (n < 1) throw std::domain_error("q1 requires n >= 1");
    const int d = model.alphabet();
    DenseSignedMeasure out(d, n, caps);
    const double big_n = static_cast<double>(model.length());

    for (const ModelComponent& component : model.components()) {
        if (component.weight == 0.0) continue;
        for (const WeightedComposition& comp : component_compositions(model, component)) {
            std::vector<double> q(d);
            for (int s = 0; s < d; ++s) q[s] = static_cast<double>(comp.counts[s]) / big_n;
            const std::vector<double> tensor = tensor_power(q, n);
            const double w = component.weight * comp.prob;
            for (std::size_t idx = 0; idx < out.cells(); ++idx) out[idx] += w * tensor[idx];
        }
    }
    return out;
}

DenseSignedMeasure q2(const ExchangeableModel& model, int n, const Caps& caps) {
    if (n < 2 || model.length() < 2) {
        throw std::domain_error("q2 requires n >= 2 (and in turn N >= 2)");
    }
    DenseSignedMeasure out = q1(model, n, caps);
    const int d = model.alphabet();
    const double big_n = static_cast<double>(model.length());
    const double pair_norm = 1.0 / (big_n * (big_n - 1.0));

    std::vector<double> correction(out.cells(), 0.0);
    std::vector<double> centered(d);
    for (const ModelComponent& component : model.components()) {
        if (component.weight == 0.0) continue;
        for (const WeightedComposition& comp : component_compositions(model, component)) {
            std::vector<double> q(d);
            for (int s = 0; s < d; ++s) q[s] = static_cast<double>(comp.counts[s]) / big_n;
            const double w = component.weight * comp.prob;
            for (int s = 0; s < d; ++s) {
                if (comp.counts[s] == 0) continue;
                // sum_j with X_j = s contributes counts[s] copies of
                // (delta_s - emp) on the two marked slots.
                for (int t = 0; t < d; ++t) centered[t] = (t == s ? 1.0 : 0.0) - q[t];
                const double coeff = w * static_cast<double>(comp.counts[s]);
                for (int k1 = 0; k1 < n; ++k1) {
                    for (int k2 = k1 + 1; k2 < n; ++k2) {
                        add_pair_tensor(correction, coeff, q, centered, n, k1, k2);
                    }
                }
            }
        }
    }
    for (std::size_t idx = 0; idx < out.cells(); ++idx) {
        out[idx] -= pair_norm * correction[idx];
    }
    return out;
}

double sup_fn_lower(const DenseSignedMeasure& r, const DenseSignedMeasure& r_prime,
                    long long trials, std::uint64_t seed, const Caps& caps) {
    if (r.alphabet() != r_prime.alphabet() || r.length() != r_prime.length()) {
        throw std::invalid_argument("measures have mismatched shapes");
    }
    if (trials < 0) throw std::domain_error("trials must be nonnegative");
    const int d = r.alphabet();
    const int n = r.length();

    DenseSignedMeasure diff = r;
    diff -= r_prime;
    DenseSignedMeasure zero(d, n, caps);

    double best = 0.0;
    // Indicator rectangles are product functions too; fold in the exact
    // rectangle sup whenever it is enumerable.
    double tuples = 1.0;
    for (int k = 0; k < n; ++k) tuples *= std::ldexp(1.0, d);
    if (tuples <= caps.rect_tuples) best = pv(diff, zero, caps);

    for (long long t = 0; t < trials; ++t) {
        TrialRng rng(seed, static_cast<std::uint64_t>(t));
        const bool unimodular = (t % 2) == 0;
        std::vector<Complex> factors(static_cast<std::size_t>(n) * d);
        for (Complex& v : factors) {
            v = unimodular ? rng.phase() : Complex{rng.sign(), 0.0};
        }
        const ProductFunction f(d, n, std::move(factors));
        best = std::max(best, std::abs(integral(diff, f)));
    }
    return best;
}

DfBounds df_bounds(std::size_t n, std::size_t big_n, std::size_t d) {
    if (n < 1 || n > big_n) throw std::domain_error("df_bounds requires 1 <= n <= N");
    DfBounds out{};
    double falling = 1.0;
    for (std::size_t m = 0; m < n; ++m) {
        falling *= static_cast<double>(big_n - m) / static_cast<double>(big_n);
    }
    out.dm_exact = 1.0 - falling;
    out.dm_quad = static_cast<double>(n) * static_cast<double>(n - 1) /
                  (2.0 * static_cast<double>(big_n));
    const double ratio = static_cast<double>(n) / static_cast<double>(big_n);
    out.finite_s = static_cast<double>(d) * ratio;
    out.bobkov = 16.0 * ratio;
    if (ratio < 1.0) {
        const double gap = std::pow(1.0 - ratio, 0.75);
        out.first_order = ratio + 2.12 * std::pow(ratio, 1.5) / gap;
        out.second_order = std::sqrt(3.0) * std::pow(ratio, 1.5) + 2.27 * ratio * ratio / gap;
    }
    return out;
}

namespace {

ComplexMatrix bridge_matrix(std::span<const int> sequence, const ProductFunction& f) {
    const std::size_t n_rows = sequence.size();
    const std::size_t n = static_cast<std::size_t>(f.length());
    if (n_rows < n) throw std::invalid_argument("sequence must be at least as long as f");
    std::vector<Complex> entries(n_rows * n);
    for (std::size_t j = 0; j < n_rows; ++j) {
        if (sequence[j] < 0 || sequence[j] >= f.alphabet()) {
            throw std::invalid_argument("sequence symbol out of alphabet range");
        }
        for (std::size_t k = 0; k < n; ++k) {
            entries[j * n + k] = f.factor(static_cast<int>(k), sequence[j]);
        }
    }
    return ComplexMatrix(n_rows, n, std::move(entries));
}

}  // namespace

Complex permanent_bridge(std::span<const int> sequence, const ProductFunction& f,
                         const Caps& caps) {
    const ComplexMatrix matrix = bridge_matrix(sequence, f);
    Complex mean_product{1.0, 0.0};
    for (std::size_t k = 0; k < matrix.cols(); ++k) {
        Complex mean{};
        for (std::size_t j = 0; j < matrix.rows(); ++j) mean += matrix(j, k);
        mean_product *= mean / static_cast<double>(matrix.rows());
    }
    return per_normalized(matrix, caps) - mean_product;
}

Complex permanent_bridge_h2(std::span<const int> sequence, const ProductFunction& f,
                            const Caps& caps) {
    const ComplexMatrix matrix = bridge_matrix(sequence, f);
    return per_normalized(matrix, caps) - h_approx(matrix, 2, caps);
}

}  // namespace permafinetti
