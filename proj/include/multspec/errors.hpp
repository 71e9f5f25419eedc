#pragma once

#include <stdexcept>
#include <string>

namespace multspec {

// A computation would exceed a configured memory or iteration budget.
// The CLI maps this to exit code 3.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// A rule or intermediate result broke a documented invariant,
// e.g. |f(p^k)| above the recorded bound.
struct invariant_error : std::logic_error {
    explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace multspec
