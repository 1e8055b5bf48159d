#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace precurse {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid input values or broken preconditions (CLI exit code 1).
class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(what) {}
};

// Malformed text/JSON inputs (CLI exit code 1).
class parse_error : public error {
public:
    explicit parse_error(const std::string& what) : error(what) {}
};

// Mixing words or ring elements over different alphabets / moduli.
class alphabet_mismatch : public domain_error {
public:
    explicit alphabet_mismatch(const std::string& what) : domain_error(what) {}
};

// A computation crossed its configured resource cap (CLI exit code 3).
// Callers are expected to either raise the budget or switch to a
// sparser backend; this is a clean signal, not a crash.
class budget_error : public error {
public:
    explicit budget_error(const std::string& what) : error(what) {}
};

// Resource caps shared by the search/convolution engines.
struct Budget {
    // Max stored terms in a dense ring-element support.
    std::size_t max_support = 10'000'000;
    // Max memoized states in pruned searches / path counters.
    std::size_t max_states = 20'000'000;
    // Max distinct elements in a walk distribution.
    std::size_t max_ball = 20'000'000;
};

inline const Budget& default_budget() {
    static const Budget b{};
    return b;
}

} // namespace precurse
