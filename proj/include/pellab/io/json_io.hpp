#pragma once

#include <string>

#include "pellab/bellman/certify.hpp"
#include "pellab/semigroup/experiments.hpp"

namespace pellab::io {

// Matrix document: {"d": int, "entries": [[[re,im], ...], ...]}.
ellipticity::ComplexMatrix parse_matrix(const std::string& json_text);
ellipticity::ComplexMatrix load_matrix(const std::string& path);

// A full problem description:
//   {"dim": 1|2, "h": real, "n": int | "mask": [rows],
//    "boundary": {"left": "dirichlet"|"neumann", ...},
//    "gamma": [{"cell": int | "i":..,"j":.., "axis": 0|1, "direction": +-1}],
//    "A": matrix | {"cells": {"i": matrix, ...}, "default": matrix} | "path",
//    "V": {"kind": "constant"|"table"|"inverse_distance", ...},
//    "phase": real, "f": data spec, "g": data spec, "B": ..., "W": ...}
struct Problem {
    semigroup::GridDomain domain;
    ellipticity::MatrixField A;
    rvec V;
    double phase = 0.0;
    // optional second operator data (defaults mirror the first)
    ellipticity::MatrixField B;
    rvec W;
    cvec f;
    cvec g;
};

Problem parse_problem(const std::string& json_text);
Problem load_problem(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// CSV emission; every numeric cell is printed with 17 significant digits.
std::string csv_embedding(const semigroup::EmbeddingReport& rep);
std::string csv_flow(const semigroup::FlowTrace& trace);
std::string csv_truncation(const semigroup::TruncationTable& table);
std::string csv_convexity(const bellman::ConvexityCertificate& cert);

}  // namespace pellab::io
