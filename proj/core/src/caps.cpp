#include "permafinetti/caps.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace permafinetti {

Caps parse_caps(const std::string& overrides, Caps base) {
    std::istringstream in(overrides);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("caps override '" + item + "' is not key=value");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        std::size_t used = 0;
        double parsed = 0.0;
        try {
            parsed = std::stod(value, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("caps value '" + value + "' is not a number");
        }
        if (used != value.size() || parsed <= 0.0) {
            throw std::invalid_argument("caps value '" + value + "' is not a positive number");
        }
        if (key == "bitmask") {
            base.bitmask_vars = static_cast<int>(parsed);
        } else if (key == "naive") {
            base.naive_terms = parsed;
        } else if (key == "measure") {
            base.measure_cells = parsed;
        } else if (key == "rect") {
            base.rect_tuples = parsed;
        } else {
            throw std::invalid_argument("unknown caps key '" + key + "'");
        }
    }
    return base;
}

Caps caps_from_env(Caps base) {
    const char* text = std::getenv("PERMAFINETTI_CAPS");
    if (text == nullptr || *text == '\0') return base;
    return parse_caps(text, base);
}

}  // namespace permafinetti
