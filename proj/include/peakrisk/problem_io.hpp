#pragma once

// Declarative problem files: JSON descriptions of a stochastic process,
// its state set, initial condition, and objective, parsed into the
// assembler's input types. The writer and parser round-trip exactly.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "peakrisk/assemble.hpp"
#include "peakrisk/model.hpp"

namespace peakrisk::io {

// malformed document or schema violation; the CLI maps this to exit code 2
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Problem {
    model::ProcessModel process;
    model::SemialgebraicSet X;
    model::InitialCondition init;
    poly::Polynomial objective = poly::Polynomial::zero(1);  // arity n
    bool unimodal = false;
    // distance problems only
    std::optional<model::SemialgebraicSet> unsafe_set;
    std::optional<poly::Polynomial> metric;  // c(x, x_u), arity n + n_u
};

Problem parse_problem(const nlohmann::json& doc);
Problem load_problem(const std::string& path);

nlohmann::json problem_to_json(const Problem& p);

// Fill a BoundSpec from the problem; kind/eps/order come from the caller.
assemble::BoundSpec to_bound_spec(const Problem& p, assemble::BoundKind kind,
                                  double eps, int order);

// The five benchmark systems shipped with the tool (keys: "flow", "twist",
// "discrete", "switched", "distance"); the CLI's write-examples command
// serializes these, and the parser round-trips them bit-exactly.
std::map<std::string, Problem> builtin_examples();

}  // namespace peakrisk::io
