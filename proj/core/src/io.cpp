#include "lerw/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "lerw/errors.hpp"
#include "lerw/version.hpp"

namespace lerw {

std::string version_string() { return kVersionString; }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

Json curve_to_json(const Curve& c) {
    Json j;
    auto& verts = j["vertices"] = Json::array();
    for (const auto& v : c.vertices) verts.push_back({v.real(), v.imag()});
    j["times"] = c.times;
    return j;
}

Curve curve_from_json(const Json& j) {
    Curve c;
    for (const auto& v : j.at("vertices"))
        c.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    c.times = j.at("times").get<std::vector<double>>();
    c.validate();
    return c;
}

Json lerw_sample_to_json(const LerwSample& s, int32_t n, uint64_t seed,
                         uint64_t stream_index) {
    Json j;
    j["n"] = n;
    j["seed"] = seed;
    j["stream_index"] = stream_index;
    j["m_n"] = s.steps;
    j["srw_steps"] = s.srw_steps;
    auto& path = j["path"] = Json::array();
    for (auto p : s.path.points) path.push_back({p.x, p.y});
    return j;
}

LerwSample lerw_sample_from_json(const Json& j) {
    LerwSample s;
    for (const auto& p : j.at("path"))
        s.path.points.push_back({p.at(0).get<int32_t>(), p.at(1).get<int32_t>()});
    s.steps = j.at("m_n").get<uint64_t>();
    s.srw_steps = j.at("srw_steps").get<uint64_t>();
    return s;
}

Json domain_spec_to_json(const DomainSpec& spec) {
    Json j;
    switch (spec.kind) {
        case DomainSpec::Kind::Disk:
            j["kind"] = "disk";
            j["radius"] = spec.radius;
            j["center"] = {spec.center.x, spec.center.y};
            break;
        case DomainSpec::Kind::Square:
            j["kind"] = "square";
            j["side"] = spec.side;
            j["center"] = {spec.center.x, spec.center.y};
            break;
        case DomainSpec::Kind::Polygon: {
            j["kind"] = "polygon";
            auto& verts = j["vertices"] = Json::array();
            for (auto v : spec.polygon) verts.push_back({v.x, v.y});
            break;
        }
    }
    return j;
}

DomainSpec domain_spec_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "disk") {
        Vec2 center{0.0, 0.0};
        if (j.contains("center"))
            center = {j["center"].at(0).get<double>(),
                      j["center"].at(1).get<double>()};
        return DomainSpec::disk(j.at("radius").get<double>(), center);
    }
    if (kind == "square") {
        Vec2 center{0.0, 0.0};
        if (j.contains("center"))
            center = {j["center"].at(0).get<double>(),
                      j["center"].at(1).get<double>()};
        return DomainSpec::square(j.at("side").get<double>(), center);
    }
    if (kind == "polygon") {
        std::vector<Vec2> verts;
        for (const auto& v : j.at("vertices"))
            verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        return DomainSpec::make_polygon(std::move(verts));
    }
    throw PreconditionError("domain spec: unknown kind '" + kind + "'");
}

void write_measure_csv(const std::string& path, const OccupationMeasure& mu) {
    std::ostringstream out;
    out << "x1,y1,x2,y2,mass\n";
    for (const auto& atom : mu.atoms()) {
        out << format_double(atom.a.real()) << ',' << format_double(atom.a.imag())
            << ',' << format_double(atom.b.real()) << ','
            << format_double(atom.b.imag()) << ',' << format_double(atom.mass)
            << '\n';
    }
    write_text_file(path, out.str());
}

OccupationMeasure read_measure_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open measure file: " + path);
    std::string line;
    std::getline(in, line); // header
    std::vector<MeasureAtom> atoms;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        MeasureAtom atom;
        double x1, y1, x2, y2, mass;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x1, &y1, &x2, &y2,
                        &mass) != 5)
            throw PreconditionError("bad measure row: " + line);
        atom.a = {x1, y1};
        atom.b = {x2, y2};
        atom.mass = mass;
        atoms.push_back(atom);
    }
    return OccupationMeasure(std::move(atoms));
}

void write_measure_raster_csv(const std::string& path,
                              const OccupationMeasure& mu, int cells,
                              double extent) {
    if (cells < 1) throw PreconditionError("raster: cells must be >= 1");
    std::vector<double> grid(size_t(cells) * size_t(cells), 0.0);
    double side = 2.0 * extent / double(cells);
    for (const auto& atom : mu.atoms()) {
        Complex r = atom.representative();
        int i = int(std::floor((r.real() + extent) / side));
        int j = int(std::floor((r.imag() + extent) / side));
        if (i < 0 || i >= cells || j < 0 || j >= cells) continue;
        grid[size_t(i) * size_t(cells) + size_t(j)] += atom.mass;
    }
    std::ostringstream out;
    out << "i,j,x_center,y_center,mass\n";
    for (int i = 0; i < cells; ++i) {
        for (int j = 0; j < cells; ++j) {
            double mass = grid[size_t(i) * size_t(cells) + size_t(j)];
            if (mass == 0.0) continue;
            double xc = -extent + (double(i) + 0.5) * side;
            double yc = -extent + (double(j) + 0.5) * side;
            out << i << ',' << j << ',' << format_double(xc) << ','
                << format_double(yc) << ',' << format_double(mass) << '\n';
        }
    }
    write_text_file(path, out.str());
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc;
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    Json j;
    j["command"] = manifest.command;
    j["config"] = manifest.config;
    j["seed"] = manifest.seed;
    j["version"] = version_string();
    j["outputs"] = manifest.outputs;
    j["started_utc"] = manifest.started_utc;
    j["finished_utc"] = manifest.finished_utc;
    j["wall_seconds"] = manifest.wall_seconds;
    write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PreconditionError("cannot open output file: " + path);
    out << body;
    if (!out) throw PreconditionError("failed writing output file: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace lerw
