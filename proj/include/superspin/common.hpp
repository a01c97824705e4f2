#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace superspin {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Eigen::VectorXi;
using SpMatD = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<Complex>;

// Base class for all errors thrown by the library. Messages name the
// violated contract so CLI users see actionable diagnostics.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid or inconsistent user input (bad config, bad argument values).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Operands whose shapes do not match (state vs partition, etc.).
class DimensionError : public Error {
public:
    using Error::Error;
};

// A reduction was requested that the coupling matrix does not admit
// (e.g. a reduced matrix for a disordered chain).
class SymmetryError : public Error {
public:
    using Error::Error;
};

// Precondition of an operation violated (wrong spacing, odd phase sum, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A state failed a numerical sanity check (trace, positivity, norm).
class NumericalStateError : public Error {
public:
    using Error::Error;
};

// Time integration exceeded a tolerance; carries the offending time.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& msg, double t)
        : Error(msg + " at t = " + std::to_string(t)), time(t) {}
    double time;
};

}  // namespace superspin
