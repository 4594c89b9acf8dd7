#pragma once

#include <string>

namespace kfrac {

// Outcome of one checked inequality lhs <relation> rhs, with its slack.
struct Verdict {
    std::string name;
    bool pass = false;
    std::string relation;  // "<=" or ">="
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    double margin = 0.0;  // positive when satisfied
};

// lhs <= rhs + tol
inline Verdict check_le(std::string name, double lhs, double rhs, double tol = 0.0) {
    Verdict v{std::move(name), false, "<=", lhs, rhs, tol, rhs + tol - lhs};
    v.pass = v.margin >= 0.0;
    return v;
}

// lhs >= rhs - tol
inline Verdict check_ge(std::string name, double lhs, double rhs, double tol = 0.0) {
    Verdict v{std::move(name), false, ">=", lhs, rhs, tol, lhs - rhs + tol};
    v.pass = v.margin >= 0.0;
    return v;
}

}  // namespace kfrac
