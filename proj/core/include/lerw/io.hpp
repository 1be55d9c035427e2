#ifndef LERW_IO_HPP
#define LERW_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "lerw/curve.hpp"
#include "lerw/lattice.hpp"
#include "lerw/measure.hpp"
#include "lerw/walk.hpp"

namespace lerw {

using Json = nlohmann::json;

std::string version_string();

// Locale-independent float formatting shared by every CSV/stdout writer.
std::string format_double(double v);

// --- curves: {"vertices": [[x,y],...], "times": [...]} ---
Json curve_to_json(const Curve& c);
Curve curve_from_json(const Json& j);

// --- LERW samples: integer path plus metadata ---
Json lerw_sample_to_json(const LerwSample& s, int32_t n, uint64_t seed,
                         uint64_t stream_index);
LerwSample lerw_sample_from_json(const Json& j);

// --- domain specs: {"kind":"disk","radius":r,"center":[x,y]} etc. ---
Json domain_spec_to_json(const DomainSpec& spec);
DomainSpec domain_spec_from_json(const Json& j);

// --- measures: CSV rows x1,y1,x2,y2,mass ---
void write_measure_csv(const std::string& path, const OccupationMeasure& mu);
OccupationMeasure read_measure_csv(const std::string& path);

// coarse-grained raster of the measure over [-extent, extent]^2
void write_measure_raster_csv(const std::string& path,
                              const OccupationMeasure& mu, int cells,
                              double extent = 1.0);

// Run manifest written next to every experiment output.
struct RunManifest {
    std::string command;
    Json config;
    uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::string started_utc;
    std::string finished_utc;
    double wall_seconds = 0.0;
};

std::string utc_timestamp();
void write_manifest(const std::string& path, const RunManifest& manifest);

void write_text_file(const std::string& path, const std::string& body);
std::string read_text_file(const std::string& path);

} // namespace lerw

#endif
