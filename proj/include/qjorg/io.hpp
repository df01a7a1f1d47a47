#pragma once

// JSON and CSV encodings shared by the CLI and the Python module.
//
//   quaternion  [w, x, y, z]
//   matrix      {"a": q, "b": q, "c": q, "d": q}
//   point       q, or the string "inf"
//   pair        {"v": 1, "S": matrix, "T": matrix}

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qjorg/dynamics.hpp"
#include "qjorg/moebius.hpp"

namespace qjorg {

/// Malformed or schema-violating input.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

struct MatrixPair {
    MatH2 s;
    MatH2 t;
};

void to_json(nlohmann::json& j, const Quaternion& q);
void from_json(const nlohmann::json& j, Quaternion& q);
void to_json(nlohmann::json& j, const MatH2& m);
void from_json(const nlohmann::json& j, MatH2& m);
void to_json(nlohmann::json& j, const ExtQuaternion& p);
void from_json(const nlohmann::json& j, ExtQuaternion& p);
void to_json(nlohmann::json& j, const InvariantSet& inv);
void to_json(nlohmann::json& j, const TestReport& r);
void to_json(nlohmann::json& j, const ConvergenceResult& c);

/// Parses JSON text; throws InputError.
nlohmann::json parse_json(const std::string& text);

/// Matrix object, optionally wrapped as {"v": 1, "M": matrix}. Throws InputError.
MatH2 parse_matrix(const nlohmann::json& j);

/// Pair object; "v" must be present and equal kSchemaVersion. Throws InputError.
MatrixPair parse_pair(const nlohmann::json& j);

nlohmann::json pair_to_json(const MatrixPair& p);

/// Full-precision trace: every quaternion as a 4-array.
nlohmann::json trace_to_json(const IterationTrace& trace);

/// CSV with columns n, abs_a, abs_b, abs_c, abs_d, bc_norm, tau_c, t_c,
/// extremal_lhs, det; `full` appends the 16 entry coordinates. Numbers use the
/// shortest round-trip decimal form; undefined displacement columns are empty.
void write_trace_csv(std::ostream& os, const IterationTrace& trace, bool full = false);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

}  // namespace qjorg
