#pragma once

#include <stdexcept>
#include <string>

namespace diskdens {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// N splits a degenerate multiplet; carries the closest closed-subshell N on either side.
class OpenShellError : public std::runtime_error {
public:
    OpenShellError(int n, int lower, int upper);
    int requested() const noexcept { return n_; }
    int lower() const noexcept { return lower_; }
    int upper() const noexcept { return upper_; }

private:
    int n_, lower_, upper_;
};

class CriticalStartError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivergentAmplitude : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GhostUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OverlapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace diskdens
