/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prismatic/error.hpp"
#include "prismatic/surface.hpp"

// Document formats. Both are JSON with a format tag. Edge ids equal the
// position of the normalized gluing pair ([t,k] with the smaller slot
// first) after lexicographic sorting, which coincides with the library's
// deterministic edge numbering. Numbers are emitted with 17 significant
// digits, so a parse of serialized output recovers doubles exactly and
// equal inputs produce byte-identical documents.

namespace prismatic {

struct SurfaceDocument {
    int num_triangles = 0;
    std::vector<TriangulatedSurface::GluingPair> gluings;
    std::vector<double> edge_lengths;
    std::optional<std::vector<double>> weights;
    std::optional<std::vector<double>> kappa_target;

    static constexpr const char* kFormat = "cusp-surface/1";

    TriangulatedSurface surface() const { return TriangulatedSurface(num_triangles, gluings); }

    DecoratedMetric metric() const {
        auto s = surface();
        if (static_cast<int>(edge_lengths.size()) != s.num_edges())
            throw ParseError("edge_lengths has " + std::to_string(edge_lengths.size()) +
                             " entries for " + std::to_string(s.num_edges()) + " edges");
        Vector l(s.num_edges());
        for (int e = 0; e < s.num_edges(); ++e) l[e] = edge_lengths[e];
        return DecoratedMetric(std::move(s), std::move(l));
    }
};

struct ResultDocument {
    int num_triangles = 0;
    std::vector<TriangulatedSurface::GluingPair> gluings;
    std::vector<double> weights;
    double residual = 0.0;
    std::vector<double> curvatures;
    std::vector<double> edge_lengths;      // upper (Penner) lengths
    std::vector<double> lower_lengths;     // lower boundary lengths
    std::vector<double> exterior_angles;   // theta per edge
    std::vector<double> cone_angles;       // omega per cusp
    std::optional<std::vector<double>> conformal_factors;
    double lower_area = 0.0;
    double gauss_bonnet_residual = 0.0;
    std::vector<int> flips;
    int iterations = 0;
    std::vector<double> residual_trace;

    static constexpr const char* kFormat = "cusp-result/1";
};

namespace io_detail {

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_doubles(std::ostream& os, const std::vector<double>& v) {
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << fmt_double(v[i]);
    os << "]";
}

inline void write_ints(std::ostream& os, const std::vector<int>& v) {
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
}

inline void write_gluings(std::ostream& os, const std::vector<TriangulatedSurface::GluingPair>& g) {
    os << "[";
    for (size_t i = 0; i < g.size(); ++i) {
        os << (i ? "," : "") << "[[" << g[i][0][0] << "," << g[i][0][1] << "],[" << g[i][1][0]
           << "," << g[i][1][1] << "]]";
    }
    os << "]";
}

// normalized ([smaller slot first]) and sorted pairs; the resulting order
// defines edge ids
inline std::vector<TriangulatedSurface::GluingPair> normalize_pairs(
    std::vector<TriangulatedSurface::GluingPair> pairs) {
    auto slot_of = [](const std::array<int, 2>& a) { return 3 * a[0] + a[1]; };
    for (auto& p : pairs)
        if (slot_of(p[0]) > slot_of(p[1])) std::swap(p[0], p[1]);
    std::sort(pairs.begin(), pairs.end(),
              [&](const auto& a, const auto& b) { return slot_of(a[0]) < slot_of(b[0]); });
    return pairs;
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
    return *it;
}

inline std::vector<double> doubles_of(const nlohmann::json& j, const char* key) {
    const auto& f = field(j, key);
    if (!f.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& x : f) {
        if (!x.is_number()) throw ParseError(std::string("field '") + key + "' must hold numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

inline std::vector<TriangulatedSurface::GluingPair> gluings_of(const nlohmann::json& j) {
    const auto& f = field(j, "gluings");
    if (!f.is_array()) throw ParseError("'gluings' must be an array of slot pairs");
    std::vector<TriangulatedSurface::GluingPair> out;
    for (const auto& p : f) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_array() || p[0].size() != 2 ||
            !p[1].is_array() || p[1].size() != 2)
            throw ParseError("each gluing must be [[t,k],[t',k']]");
        out.push_back({{{p[0][0].get<int>(), p[0][1].get<int>()},
                        {p[1][0].get<int>(), p[1][1].get<int>()}}});
    }
    return normalize_pairs(std::move(out));
}

}  // namespace io_detail

inline std::string serialize(const SurfaceDocument& doc) {
    std::ostringstream os;
    os << "{\n  \"format\": \"" << SurfaceDocument::kFormat << "\",\n";
    os << "  \"num_triangles\": " << doc.num_triangles << ",\n  \"gluings\": ";
    io_detail::write_gluings(os, io_detail::normalize_pairs(doc.gluings));
    os << ",\n  \"edge_lengths\": ";
    io_detail::write_doubles(os, doc.edge_lengths);
    if (doc.weights) {
        os << ",\n  \"weights\": ";
        io_detail::write_doubles(os, *doc.weights);
    }
    if (doc.kappa_target) {
        os << ",\n  \"kappa_target\": ";
        io_detail::write_doubles(os, *doc.kappa_target);
    }
    os << "\n}\n";
    return os.str();
}

inline std::string serialize(const ResultDocument& doc) {
    std::ostringstream os;
    os << "{\n  \"format\": \"" << ResultDocument::kFormat << "\",\n";
    os << "  \"num_triangles\": " << doc.num_triangles << ",\n  \"gluings\": ";
    io_detail::write_gluings(os, io_detail::normalize_pairs(doc.gluings));
    os << ",\n  \"weights\": ";
    io_detail::write_doubles(os, doc.weights);
    os << ",\n  \"residual\": " << io_detail::fmt_double(doc.residual);
    os << ",\n  \"curvatures\": ";
    io_detail::write_doubles(os, doc.curvatures);
    os << ",\n  \"edge_lengths\": ";
    io_detail::write_doubles(os, doc.edge_lengths);
    os << ",\n  \"lower_lengths\": ";
    io_detail::write_doubles(os, doc.lower_lengths);
    os << ",\n  \"exterior_angles\": ";
    io_detail::write_doubles(os, doc.exterior_angles);
    os << ",\n  \"cone_angles\": ";
    io_detail::write_doubles(os, doc.cone_angles);
    if (doc.conformal_factors) {
        os << ",\n  \"conformal_factors\": ";
        io_detail::write_doubles(os, *doc.conformal_factors);
    }
    os << ",\n  \"lower_area\": " << io_detail::fmt_double(doc.lower_area);
    os << ",\n  \"gauss_bonnet_residual\": " << io_detail::fmt_double(doc.gauss_bonnet_residual);
    os << ",\n  \"flips\": ";
    io_detail::write_ints(os, doc.flips);
    os << ",\n  \"iterations\": " << doc.iterations;
    os << ",\n  \"residual_trace\": ";
    io_detail::write_doubles(os, doc.residual_trace);
    os << "\n}\n";
    return os.str();
}

inline SurfaceDocument parse_surface_document(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (io_detail::field(j, "format").get<std::string>() != SurfaceDocument::kFormat)
        throw ParseError("expected format tag " + std::string(SurfaceDocument::kFormat));
    SurfaceDocument doc;
    doc.num_triangles = io_detail::field(j, "num_triangles").get<int>();
    doc.gluings = io_detail::gluings_of(j);
    doc.edge_lengths = io_detail::doubles_of(j, "edge_lengths");
    if (j.contains("weights")) doc.weights = io_detail::doubles_of(j, "weights");
    if (j.contains("kappa_target")) doc.kappa_target = io_detail::doubles_of(j, "kappa_target");
    return doc;
}

inline ResultDocument parse_result_document(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (io_detail::field(j, "format").get<std::string>() != ResultDocument::kFormat)
        throw ParseError("expected format tag " + std::string(ResultDocument::kFormat));
    ResultDocument doc;
    doc.num_triangles = io_detail::field(j, "num_triangles").get<int>();
    doc.gluings = io_detail::gluings_of(j);
    doc.weights = io_detail::doubles_of(j, "weights");
    doc.residual = io_detail::field(j, "residual").get<double>();
    doc.curvatures = io_detail::doubles_of(j, "curvatures");
    doc.edge_lengths = io_detail::doubles_of(j, "edge_lengths");
    doc.lower_lengths = io_detail::doubles_of(j, "lower_lengths");
    doc.exterior_angles = io_detail::doubles_of(j, "exterior_angles");
    doc.cone_angles = io_detail::doubles_of(j, "cone_angles");
    if (j.contains("conformal_factors"))
        doc.conformal_factors = io_detail::doubles_of(j, "conformal_factors");
    doc.lower_area = io_detail::field(j, "lower_area").get<double>();
    doc.gauss_bonnet_residual = io_detail::field(j, "gauss_bonnet_residual").get<double>();
    for (const auto& x : io_detail::field(j, "flips")) doc.flips.push_back(x.get<int>());
    doc.iterations = io_detail::field(j, "iterations").get<int>();
    doc.residual_trace = io_detail::doubles_of(j, "residual_trace");
    return doc;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

}  // namespace prismatic
