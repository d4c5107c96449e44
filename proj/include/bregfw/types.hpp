#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bregfw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point lies outside the domain of a reference function or objective.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(const std::string& what, long expected, long got)
        : Error(what + ": expected dimension " + std::to_string(expected) + ", got " +
                std::to_string(got)) {}
};

/// Divergence domain excludes part of the feasible set.
class Incompatible : public Error {
public:
    using Error::Error;
};

class InvalidCurvature : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class LabelError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class MissingFStar : public Error {
public:
    using Error::Error;
};

/// The backtracking safeguard tripped; `L()` is the estimate that was still rejected.
class BacktrackOverflow : public Error {
public:
    BacktrackOverflow(int iteration, double L)
        : Error("backtracking safeguard tripped at iteration " + std::to_string(iteration) +
                " with L_k = " + std::to_string(L)),
          iteration_(iteration), L_(L) {}

    int iteration() const { return iteration_; }
    double L() const { return L_; }

private:
    int iteration_;
    double L_;
};

inline void check_dim(const char* what, long expected, long got) {
    if (expected != got) throw DimensionMismatch(what, expected, got);
}

} // namespace bregfw
