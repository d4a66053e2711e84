#pragma once

#include <stdexcept>
#include <string>

namespace permafinetti {

// Thrown when an operation would exceed a configured enumeration cap
// (subset coefficient tables, injection counts, dense measure cells, ...).
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what_arg)
        : std::runtime_error(what_arg) {}
};

}  // namespace permafinetti
