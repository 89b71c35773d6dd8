#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "symsep/cones.hpp"
#include "symsep/config.hpp"
#include "symsep/dicke.hpp"
#include "symsep/embedding.hpp"
#include "symsep/errors.hpp"
#include "symsep/ptranspose.hpp"
#include "symsep/separability.hpp"

namespace symsep {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace detail {

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

/// Position of the first occurrence of "needle" (quoted) in the text, for
/// pointing semantic errors at the offending key.
inline std::pair<std::size_t, std::size_t> locate(const std::string& text, const std::string& needle) {
    const auto at = text.find("\"" + needle + "\"");
    if (at == std::string::npos) return {0, 0};
    return line_column(text, at + 1);
}

[[noreturn]] inline void fail_at(const std::string& text, const std::string& needle, const std::string& what) {
    const auto [line, col] = locate(text, needle);
    throw ParseError(what, line, col);
}

inline Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string msg = e.what();
        const auto colon = msg.find("syntax error");
        throw ParseError(colon == std::string::npos ? msg : msg.substr(colon), line, col);
    }
}

inline int require_int(const Json& doc, const std::string& text, const char* field, int min) {
    if (!doc.contains(field)) throw ParseError(std::string("missing field \"") + field + "\"");
    const auto& v = doc[field];
    if (!v.is_number_integer() || v.get<long long>() < min) {
        fail_at(text, field, std::string("field \"") + field + "\" must be an integer >= " + std::to_string(min));
    }
    return v.get<int>();
}

inline std::vector<int> parse_counts(const std::string& key, const std::string& text) {
    std::vector<int> out;
    std::string token;
    std::istringstream ss(key);
    while (std::getline(ss, token, ',')) {
        std::size_t used = 0;
        long long v = -1;
        try {
            v = std::stoll(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != token.size()) fail_at(text, key, "key \"" + key + "\" is not a list of integers");
        if (v < 0) fail_at(text, key, "key \"" + key + "\" has a negative count");
        out.push_back(static_cast<int>(v));
    }
    if (!key.empty() && key.back() == ',') fail_at(text, key, "key \"" + key + "\" is not a list of integers");
    return out;
}

inline double require_probability(const Json& v, const std::string& text, const std::string& key) {
    if (!v.is_number()) fail_at(text, key, "value of \"" + key + "\" is not a number");
    const double p = v.get<double>();
    if (!(p >= 0.0)) fail_at(text, key, "value of \"" + key + "\" is negative");
    return p;
}

}  // namespace detail

/// Parses { "n_parties": N, "local_dim": d, "probs": { "k0,k1,...": p, ... } }.
inline DsState parse_state(const std::string& text) {
    const Json doc = detail::parse_json(text);
    if (!doc.is_object()) throw ParseError("state file must hold a JSON object", 1, 1);
    const int n = detail::require_int(doc, text, "n_parties", 1);
    const int d = detail::require_int(doc, text, "local_dim", 2);
    if (!doc.contains("probs") || !doc["probs"].is_object()) {
        detail::fail_at(text, "probs", "field \"probs\" must be an object");
    }
    std::map<PartitionIndex, double> probs;
    for (const auto& [key, value] : doc["probs"].items()) {
        auto counts = detail::parse_counts(key, text);
        if (counts.size() != static_cast<std::size_t>(d)) {
            detail::fail_at(text, key, "key \"" + key + "\" has " + std::to_string(counts.size()) +
                                           " counts, expected local_dim = " + std::to_string(d));
        }
        int sum = 0;
        for (int c : counts) sum += c;
        if (sum != n) {
            detail::fail_at(text, key, "key \"" + key + "\" sums to " + std::to_string(sum) +
                                           ", expected n_parties = " + std::to_string(n));
        }
        PartitionIndex k(std::move(counts));
        if (probs.count(k)) detail::fail_at(text, key, "key \"" + key + "\" repeats a partition");
        probs.emplace(std::move(k), detail::require_probability(value, text, key));
    }
    try {
        return DsState(n, d, probs);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

inline DsState load_state(const std::string& path) { return parse_state(read_file(path)); }

inline Json to_json(const DsState& s) {
    Json probs = Json::object();
    for (std::size_t i = 0; i < s.probs().size(); ++i) probs[s.partitions()[i].key()] = s.probs()[i];
    return Json{{"n_parties", s.n_parties()}, {"local_dim", s.local_dim()}, {"probs", probs}};
}

/// Parses { "local_dim": k, "diag": { "a,b": p, ... },
///          "coherences": [ { "pair": ["a,b", "c,e"], "value": alpha }, ... ] }.
inline BipartiteSymmetricState parse_bipartite_state(const std::string& text, const Tolerances& tol = {}) {
    const Json doc = detail::parse_json(text);
    if (!doc.is_object()) throw ParseError("state file must hold a JSON object", 1, 1);
    const int k = detail::require_int(doc, text, "local_dim", 1);
    if (!doc.contains("diag") || !doc["diag"].is_object()) detail::fail_at(text, "diag", "field \"diag\" must be an object");
    auto pair_of = [&](const std::string& key) {
        const auto c = detail::parse_counts(key, text);
        if (c.size() != 2 || c[0] >= k || c[1] >= k) {
            detail::fail_at(text, key, "pair \"" + key + "\" must be two levels below local_dim");
        }
        return BipartiteSymmetricState::pair_index(c[0], c[1], k);
    };
    std::vector<double> diag(BipartiteSymmetricState::pair_count(k), 0.0);
    for (const auto& [key, value] : doc["diag"].items()) {
        diag[pair_of(key)] += detail::require_probability(value, text, key);
    }
    BipartiteSymmetricState::Coherences coh;
    if (doc.contains("coherences")) {
        if (!doc["coherences"].is_array()) detail::fail_at(text, "coherences", "field \"coherences\" must be an array");
        for (const auto& entry : doc["coherences"]) {
            if (!entry.is_object() || !entry.contains("pair") || !entry["pair"].is_array() ||
                entry["pair"].size() != 2 || !entry["pair"][0].is_string() || !entry["pair"][1].is_string() ||
                !entry.contains("value") || !entry["value"].is_number()) {
                detail::fail_at(text, "coherences", "coherence entries need \"pair\": [\"a,b\", \"c,e\"] and a numeric \"value\"");
            }
            auto u = pair_of(entry["pair"][0].get<std::string>());
            auto v = pair_of(entry["pair"][1].get<std::string>());
            if (u > v) std::swap(u, v);
            coh[{u, v}] += entry["value"].get<double>();
        }
    }
    try {
        return BipartiteSymmetricState(k, std::move(diag), std::move(coh), tol.normalization);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

inline Json to_json(const BipartiteSymmetricState& s) {
    const int k = s.local_dim();
    auto name = [&](std::size_t pair) {
        const auto [a, b] = BipartiteSymmetricState::pair_at(pair, k);
        return std::to_string(a) + "," + std::to_string(b);
    };
    Json diag = Json::object();
    for (std::size_t i = 0; i < s.diag().size(); ++i) diag[name(i)] = s.diag()[i];
    Json coh = Json::array();
    for (const auto& [key, value] : s.coherences()) {
        coh.push_back(Json{{"pair", {name(key.first), name(key.second)}}, {"value", value}});
    }
    return Json{{"local_dim", k}, {"diag", diag}, {"coherences", coh}};
}

inline Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline Matrix matrix_from_json(const Json& rows) {
    if (!rows.is_array() || rows.empty()) throw ParseError("matrix must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto m = static_cast<Eigen::Index>(rows[0].size());
    Matrix out(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!rows[static_cast<std::size_t>(i)].is_array() || static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != m) {
            throw ParseError("matrix rows have different lengths");
        }
        for (Eigen::Index j = 0; j < m; ++j) out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
    }
    return out;
}

inline Json to_json(const Tolerances& t) {
    return Json{{"psd_relative", t.psd_relative},     {"dnn_entry", t.dnn_entry},
                {"symmetry", t.symmetry},             {"normalization", t.normalization},
                {"cp_residual", t.cp_residual},       {"witness", t.witness},
                {"reconstruction", t.reconstruction}, {"rank_relative", t.rank_relative},
                {"slice_constraint", t.slice_constraint}, {"weight_prune", t.weight_prune}};
}

inline Json to_json(const Config& c) {
    return Json{{"tolerances", to_json(c.tol)},
                {"limits", {{"max_dense_rows", c.limits.max_dense_rows}, {"max_reduced_side", c.limits.max_reduced_side}}},
                {"cp", {{"max_rank", c.cp.max_rank}, {"restarts", c.cp.restarts}, {"iterations", c.cp.iterations}, {"seed", c.cp.seed}}},
                {"decomposition",
                 {{"rounds", c.decomposition.rounds},
                  {"initial_atoms", c.decomposition.initial_atoms},
                  {"pricing_starts", c.decomposition.pricing_starts},
                  {"pricing_steps", c.decomposition.pricing_steps},
                  {"seed", c.decomposition.seed}}}};
}

/// Overlays a JSON config onto `base`; unknown keys are rejected.
inline Config parse_config(const std::string& text, Config base = {}) {
    const Json doc = detail::parse_json(text);
    if (!doc.is_object()) throw ParseError("config must hold a JSON object", 1, 1);
    auto number = [&](const Json& section, const std::string& key, auto& target) {
        const auto& v = section[key];
        if (!v.is_number()) detail::fail_at(text, key, "config value \"" + key + "\" must be a number");
        target = v.get<std::decay_t<decltype(target)>>();
    };
    for (const auto& [name, section] : doc.items()) {
        if (name != "tolerances" && name != "limits" && name != "cp" && name != "decomposition") {
            detail::fail_at(text, name, "unknown config section \"" + name + "\"");
        }
        if (!section.is_object()) detail::fail_at(text, name, "config section \"" + name + "\" must be an object");
        for (const auto& [key, value] : section.items()) {
            (void)value;
            auto& t = base.tol;
            if (name == "tolerances") {
                if (key == "psd_relative") number(section, key, t.psd_relative);
                else if (key == "dnn_entry") number(section, key, t.dnn_entry);
                else if (key == "symmetry") number(section, key, t.symmetry);
                else if (key == "normalization") number(section, key, t.normalization);
                else if (key == "cp_residual") number(section, key, t.cp_residual);
                else if (key == "witness") number(section, key, t.witness);
                else if (key == "reconstruction") number(section, key, t.reconstruction);
                else if (key == "rank_relative") number(section, key, t.rank_relative);
                else if (key == "slice_constraint") number(section, key, t.slice_constraint);
                else if (key == "weight_prune") number(section, key, t.weight_prune);
                else detail::fail_at(text, key, "unknown tolerance \"" + key + "\"");
            } else if (name == "limits") {
                if (key == "max_dense_rows") number(section, key, base.limits.max_dense_rows);
                else if (key == "max_reduced_side") number(section, key, base.limits.max_reduced_side);
                else detail::fail_at(text, key, "unknown limit \"" + key + "\"");
            } else if (name == "cp") {
                if (key == "max_rank") number(section, key, base.cp.max_rank);
                else if (key == "restarts") number(section, key, base.cp.restarts);
                else if (key == "iterations") number(section, key, base.cp.iterations);
                else if (key == "seed") number(section, key, base.cp.seed);
                else detail::fail_at(text, key, "unknown cp option \"" + key + "\"");
            } else {
                auto& o = base.decomposition;
                if (key == "rounds") number(section, key, o.rounds);
                else if (key == "initial_atoms") number(section, key, o.initial_atoms);
                else if (key == "pricing_starts") number(section, key, o.pricing_starts);
                else if (key == "pricing_steps") number(section, key, o.pricing_steps);
                else if (key == "seed") number(section, key, o.seed);
                else detail::fail_at(text, key, "unknown decomposition option \"" + key + "\"");
            }
        }
    }
    return base;
}

inline Json to_json(const BlockMatrix& bm) {
    Json blocks = Json::array();
    Json labels = Json::array();
    Json names = Json::array();
    Json copies = Json::array();
    Json weights = Json::array();
    for (const auto& b : bm.blocks) {
        blocks.push_back(to_json(b.matrix.matrix()));
        labels.push_back(b.matrix.labels());
        names.push_back(b.name);
        copies.push_back(b.copies);
        weights.push_back(b.weights);
    }
    Json singletons = Json::array();
    for (const auto& s : bm.singletons) singletons.push_back(Json{{"label", s.label}, {"value", s.value}, {"copies", s.copies}});
    return Json{{"n_parties", bm.n_parties}, {"local_dim", bm.local_dim}, {"transposed", bm.transposed},
                {"total_side", bm.total_side()}, {"names", names}, {"blocks", blocks}, {"labels", labels},
                {"copies", copies}, {"weights", weights}, {"singletons", singletons},
                {"zero_eigenvalues", bm.zero_eigenvalues}};
}

inline Json to_json(const ConeVerdict& v) {
    Json out{{"psd", v.psd},
             {"dnn", v.dnn},
             {"cp", to_string(v.cp)},
             {"certificate", to_string(v.certificate)},
             {"min_eigenvalue", v.spectrum.size() ? v.spectrum(0) : 0.0},
             {"min_entry", v.min_entry},
             {"seed", v.seed},
             {"restarts_used", v.restarts_used},
             {"note", v.note}};
    if (v.factor.size()) {
        out["factor"] = to_json(v.factor);
        out["factor_residual"] = v.residual;
    }
    if (v.witness.size()) {
        out["witness"] = to_json(v.witness);
        out["witness_value"] = v.witness_value;
    }
    return out;
}

inline Json to_json(const BlockVerdict& v) {
    Json blocks = Json::array();
    for (const auto& b : v.blocks) blocks.push_back(to_json(b));
    return Json{{"overall", to_json(v.overall)}, {"singletons_nonnegative", v.singletons_nonnegative}, {"blocks", blocks}};
}

inline Json to_json(const CutVerdict& c) {
    return Json{{"cut", c.cut.label()}, {"left_parties", c.cut.left_parties()}, {"ppt", c.ppt},
                {"min_eigenvalue", c.min_eigenvalue}, {"max_eigenvalue", c.max_eigenvalue}};
}

inline Json to_json(const SeparableDecomposition& dec, const Tolerances& tol = {}) {
    Json terms = Json::array();
    for (const auto& t : dec.terms()) {
        Json locals = Json::array();
        for (const auto& v : t.local_states) {
            Json re = Json::array();
            Json im = Json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                re.push_back(v(i).real());
                im.push_back(v(i).imag());
            }
            locals.push_back(Json{{"re", re}, {"im", im}});
        }
        terms.push_back(Json{{"weight", t.weight}, {"local_states", locals}});
    }
    return Json{{"target", to_json(dec.target())},
                {"reconstruction_error", dec.reconstruction_error()},
                {"tolerance", tol.reconstruction},
                {"weight_sum", dec.weight_sum()},
                {"phase_group", dec.phase_group()},
                {"term_count", dec.terms().size()},
                {"terms", terms}};
}

inline Json to_json(const MomentWitness& w) {
    return Json{{"kind", "three-party-moment"}, {"fired", w.fired}, {"levels", w.levels},
                {"scaling", w.scaling}, {"value", w.value}};
}

inline Json to_json(const EmbeddingDictionary& dict) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < dict.rows.size(); ++r) {
        Json terms = Json::array();
        for (const auto& e : dict.rows[r]) {
            terms.push_back(Json{{"coefficient", e.coefficient},
                                 {"pair", {level_string(dict.half_labels[e.a]), level_string(dict.half_labels[e.b])}}});
        }
        rows.push_back(Json{{"label", level_string(dict.labels[r])}, {"terms", terms}});
    }
    Json half = Json::array();
    for (const auto& h : dict.half_labels) half.push_back(level_string(h));
    return Json{{"n_parties", dict.n_parties}, {"local_dim", dict.local_dim}, {"target_dim", dict.target_dim},
                {"half_labels", half}, {"rows", rows}};
}

inline Json to_json(const RankTable& t) {
    return Json{{"source_dim", t.source_dim},       {"source_symmetric_dim", t.source_symmetric_dim},
                {"source_rank", t.source_rank},     {"source_pt_side", t.source_dim},
                {"source_pt_rank", t.source_pt_rank}, {"target_dim", t.target_dim},
                {"target_symmetric_dim", t.target_symmetric_dim}, {"target_rank", t.target_rank},
                {"target_pt_side", t.target_dim},   {"target_pt_rank", t.target_pt_rank}};
}

}  // namespace symsep
