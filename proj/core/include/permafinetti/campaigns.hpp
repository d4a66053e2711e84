#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "permafinetti/caps.hpp"
#include "permafinetti/complex_matrix.hpp"
#include "permafinetti/definetti.hpp"
#include "permafinetti/rng.hpp"

namespace permafinetti {

// Randomized verification result. Serialization deliberately omits
// elapsed_ms so reports with the same seed and configuration are
// byte-identical; timing is a diagnostic, not part of the record.
struct VerificationReport {
    std::string campaign;
    long long trials = 0;
    long long violations = 0;
    double max_relative_slack = 0.0;  // max over assertions of (lhs-rhs)/(1+rhs)
    std::string worst_case;           // serialized input attaining the max
    std::uint64_t seed = 0;
    long long elapsed_ms = 0;
};

std::string report_to_json(const VerificationReport& report);

struct CampaignOptions {
    long long trials = 10000;
    std::uint64_t seed = 1;
    int nmax = 8;  // largest row count drawn for random instances
    Caps caps{};
};

// Suites: permanents, expansion, bounds, lemmas, definetti.
std::vector<std::string> campaign_names();
VerificationReport run_campaign(const std::string& suite, const CampaignOptions& options);

// Random input families shared by the campaigns and the test suites.
enum class MatrixFamily {
    UnitDisk,       // entries i.i.d. uniform on the closed unit disk
    Phases,         // unimodular entries
    Signs,          // real +-1 entries
    ZeroColsum,     // unit-disk entries re-centered to zero column sums
    IdenticalCols,  // one random unit-disk column replicated
};

ComplexMatrix random_matrix(MatrixFamily family, std::size_t n_rows, std::size_t n_cols,
                            TrialRng& rng);
// family cycles through the unit-bounded families by index.
MatrixFamily unit_bounded_family(std::uint64_t index);

ExchangeableModel random_model(TrialRng& rng, int max_alphabet, int max_length);
ProductFunction random_product_function(TrialRng& rng, int alphabet, int length,
                                        bool unimodular);

}  // namespace permafinetti
