#include "qjorg/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace qjorg {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void to_json(json& j, const Quaternion& q) { j = json::array({q.w, q.x, q.y, q.z}); }

void from_json(const json& j, Quaternion& q) {
    if (!j.is_array() || j.size() != 4) {
        throw InputError("quaternion must be an array of 4 numbers");
    }
    std::array<double, 4> v{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (!j[i].is_number()) {
            throw InputError("quaternion coordinates must be numbers");
        }
        v[i] = j[i].get<double>();
    }
    q = {v[0], v[1], v[2], v[3]};
}

void to_json(json& j, const MatH2& m) { j = json{{"a", m.a}, {"b", m.b}, {"c", m.c}, {"d", m.d}}; }

void from_json(const json& j, MatH2& m) {
    if (!j.is_object()) {
        throw InputError("matrix must be an object with keys a, b, c, d");
    }
    for (const char* key : {"a", "b", "c", "d"}) {
        if (!j.contains(key)) {
            throw InputError(std::string("matrix is missing entry '") + key + "'");
        }
    }
    m = {j.at("a").get<Quaternion>(), j.at("b").get<Quaternion>(), j.at("c").get<Quaternion>(),
         j.at("d").get<Quaternion>()};
}

void to_json(json& j, const ExtQuaternion& p) {
    if (p.is_infinite()) {
        j = "inf";
    } else {
        j = p.value();
    }
}

void from_json(const json& j, ExtQuaternion& p) {
    if (j.is_string()) {
        if (j.get<std::string>() != "inf") {
            throw InputError("the only string point is \"inf\"");
        }
        p = ExtQuaternion::infinity();
        return;
    }
    p = j.get<Quaternion>();
}

void to_json(json& j, const InvariantSet& inv) {
    j = json{{"alpha", inv.alpha}, {"beta", inv.beta}, {"gamma", inv.gamma},
             {"delta", inv.delta}, {"sigma", inv.sigma}, {"tau", inv.tau}};
}

void to_json(json& j, const TestReport& r) {
    json diag = json::object();
    for (const auto& [key, value] : r.diagnostics) {
        diag[key] = finite_or_null(value);
    }
    j = json{{"test", r.test_name},
             {"lhs", finite_or_null(r.lhs)},
             {"threshold", finite_or_null(r.threshold)},
             {"margin", finite_or_null(r.margin)},
             {"tol", r.tol},
             {"verdict", std::string(to_string(r.verdict))},
             {"preconditions_met", r.preconditions_met},
             {"diagnostics", diag},
             {"notes", r.notes}};
}

void to_json(json& j, const ConvergenceResult& c) {
    j = json{{"verdict", std::string(to_string(c.verdict))},
             {"rate", finite_or_null(c.rate)},
             {"extremal_variation", finite_or_null(c.extremal_variation)}};
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

MatH2 parse_matrix(const json& j) {
    try {
        if (j.is_object() && j.contains("M")) {
            if (j.contains("v") && j.at("v") != kSchemaVersion) {
                throw InputError("unsupported schema version");
            }
            return j.at("M").get<MatH2>();
        }
        return j.get<MatH2>();
    } catch (const json::exception& e) {
        throw InputError(std::string("bad matrix: ") + e.what());
    }
}

MatrixPair parse_pair(const json& j) {
    if (!j.is_object()) {
        throw InputError("pair must be an object {\"v\": 1, \"S\": ..., \"T\": ...}");
    }
    if (!j.contains("v") || !j.at("v").is_number_integer() || j.at("v").get<int>() != kSchemaVersion) {
        throw InputError("pair must carry \"v\": 1");
    }
    if (!j.contains("S") || !j.contains("T")) {
        throw InputError("pair must contain S and T");
    }
    try {
        return {j.at("S").get<MatH2>(), j.at("T").get<MatH2>()};
    } catch (const json::exception& e) {
        throw InputError(std::string("bad pair: ") + e.what());
    }
}

json pair_to_json(const MatrixPair& p) { return json{{"v", kSchemaVersion}, {"S", p.s}, {"T", p.t}}; }

json trace_to_json(const IterationTrace& trace) {
    json steps = json::array();
    for (const auto& st : trace.steps) {
        json row{{"n", st.n},          {"S", st.s},
                 {"bc_norm", st.bc_norm}, {"det", st.det},
                 {"extremal_lhs", st.extremal_lhs}};
        if (st.has_displacements) {
            row["tau"] = st.tau;
            row["t"] = st.t;
            row["tau_c"] = st.tau_c;
            row["t_c"] = st.t_c;
        } else {
            row["tau"] = nullptr;
            row["t"] = nullptr;
            row["tau_c"] = nullptr;
            row["t_c"] = nullptr;
        }
        steps.push_back(std::move(row));
    }
    return json{{"v", kSchemaVersion},
                {"mode", std::string(to_string(trace.mode))},
                {"T", trace.t_matrix},
                {"truncated", trace.truncated},
                {"truncation_reason", trace.truncation_reason},
                {"steps", steps}};
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace, bool full) {
    os << "n,abs_a,abs_b,abs_c,abs_d,bc_norm,tau_c,t_c,extremal_lhs,det";
    if (full) {
        for (const char entry : {'a', 'b', 'c', 'd'}) {
            for (const char coord : {'w', 'x', 'y', 'z'}) {
                os << ',' << entry << '_' << coord;
            }
        }
    }
    os << '\n';
    for (const auto& st : trace.steps) {
        os << st.n << ',' << format_double(norm(st.s.a)) << ',' << format_double(norm(st.s.b)) << ','
           << format_double(norm(st.s.c)) << ',' << format_double(norm(st.s.d)) << ',' << format_double(st.bc_norm)
           << ',';
        if (st.has_displacements) {
            os << format_double(st.tau_c) << ',' << format_double(st.t_c);
        } else {
            os << ',';
        }
        os << ',' << format_double(st.extremal_lhs) << ',' << format_double(st.det);
        if (full) {
            for (const Quaternion* q : {&st.s.a, &st.s.b, &st.s.c, &st.s.d}) {
                os << ',' << format_double(q->w) << ',' << format_double(q->x) << ',' << format_double(q->y) << ','
                   << format_double(q->z);
            }
        }
        os << '\n';
    }
}

}  // namespace qjorg
