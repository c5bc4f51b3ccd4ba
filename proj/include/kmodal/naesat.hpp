#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kmodal::nae {

struct Literal {
    int var;   // 0-based
    bool neg;
    bool operator==(const Literal&) const = default;
};

struct Formula {
    int nvars = 0;
    std::vector<std::vector<Literal>> clauses;
};

struct Result {
    bool sat = false;
    std::vector<bool> assignment;  // size nvars when sat
    std::string reason;            // set when unsat
};

// NAE solver for formulas in which every variable occurs in at most two
// clauses. Peels clauses holding a variable's only occurrence, solves
// residual 2-clause cycles by sign propagation, and finishes the remaining
// (always satisfiable) components constructively. Throws
// std::invalid_argument when a variable occurs in three or more clauses.
Result nae_solve(const Formula& f);

// exhaustive oracle, lexicographically least witness; ~20 variables max
Result nae_brute(const Formula& f);

// true iff no component of the variable-clause graph is a simple cycle;
// whenever true, nae_solve is guaranteed to return sat
bool always_sat_check(const Formula& f);

bool check_assignment(const Formula& f, const std::vector<bool>& a);

// DIMACS-like text: header "p nae <vars> <clauses>", clause lines of
// 1-based signed literals terminated by 0, comments "c ..."
Formula parse_formula(std::string_view text);
std::string serialize_formula(const Formula& f);

}  // namespace kmodal::nae
