#pragma once

#include <stdexcept>
#include <string>

namespace ubiq {

// Input failed structural validation (bad family tag, non-monotone grid, ...).
struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// A predicate could not be decided within the configured bit budget.
struct precision_exhausted : std::runtime_error {
    explicit precision_exhausted(const std::string& what, long certified = 0)
        : std::runtime_error(what), certified_items(certified) {}
    long certified_items;
};

// Enumeration / grid / tree budget exceeded.
struct budget_exceeded : std::runtime_error {
    explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

// Operation not defined for the given input (outside the domain of the contract).
struct domain_error : std::domain_error {
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// Combination of inputs the implementation refuses to guess about.
struct unsupported_error : std::runtime_error {
    explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

// Default certification budget, overridable via UBIQLAB_BIT_BUDGET.
unsigned bit_budget();

}  // namespace ubiq
