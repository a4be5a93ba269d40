#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvflow {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Domain errors map to CLI exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

class NotStronglyConnected : public Error {
public:
    NotStronglyConnected(const std::string& msg, std::vector<std::vector<int>> comps)
        : Error(msg), components(std::move(comps)) {}

    std::vector<std::vector<int>> components;
};

// All user-facing floats are printed with 12 significant digits.
inline std::string format_sig12(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline double round_sig12(double v) { return std::strtod(format_sig12(v).c_str(), nullptr); }

}  // namespace curvflow
