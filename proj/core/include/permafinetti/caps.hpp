#pragma once

#include <string>

namespace permafinetti {

// Enumeration limits. Defaults are sized so that everything fits in memory
// and finishes interactively on a laptop. The CLI can override them through
// the PERMAFINETTI_CAPS environment variable, e.g.
//   PERMAFINETTI_CAPS="bitmask=26,naive=2e8,measure=1e7,rect=1e7"
struct Caps {
    int bitmask_vars = 24;       // max n for 2^n subset-indexed coefficient tables
    double naive_terms = 1e8;    // max number of injections enumerated by per_naive
    double measure_cells = 1e7;  // max d^n cells of a dense measure
    double rect_tuples = 1e7;    // max (2^d)^n rectangles enumerated by pv
};

// Parses a comma-separated "key=value" override list (keys: bitmask, naive,
// measure, rect) on top of `base`. Throws std::invalid_argument on unknown
// keys or unparsable values.
Caps parse_caps(const std::string& overrides, Caps base = {});

// Applies PERMAFINETTI_CAPS from the environment, if set.
Caps caps_from_env(Caps base = {});

}  // namespace permafinetti
