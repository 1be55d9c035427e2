#include <doctest.h>

#include <cstdio>

#include "lerw/errors.hpp"
#include "lerw/io.hpp"
#include "lerw/rng.hpp"

using namespace lerw;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path("/tmp/lerwlab_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("curve json round trip") {
    Curve c{{{0.0, 0.0}, {0.5, 0.25}, {0.5, 1.0}}, {0.0, 0.7, 2.0}};
    Curve back = curve_from_json(curve_to_json(c));
    REQUIRE(back.vertices.size() == c.vertices.size());
    for (size_t i = 0; i < c.vertices.size(); ++i) {
        CHECK(back.vertices[i] == c.vertices[i]);
        CHECK(back.times[i] == c.times[i]);
    }
}

TEST_CASE("lerw sample json round trip") {
    RngStream rng(3, 11);
    LerwSample s = sample_lerw(8, rng);
    Json j = lerw_sample_to_json(s, 8, 3, 11);
    CHECK(j["n"] == 8);
    CHECK(j["m_n"] == s.steps);
    LerwSample back = lerw_sample_from_json(j);
    CHECK(back.path.points == s.path.points);
    CHECK(back.steps == s.steps);
    CHECK(back.srw_steps == s.srw_steps);
}

TEST_CASE("domain spec json forms") {
    auto disk = domain_spec_from_json(
        Json::parse(R"({"kind":"disk","radius":1.0,"center":[0,0]})"));
    CHECK(disk.kind == DomainSpec::Kind::Disk);
    CHECK(disk.radius == 1.0);

    auto square = domain_spec_from_json(
        Json::parse(R"({"kind":"square","side":4})"));
    CHECK(square.kind == DomainSpec::Kind::Square);

    auto poly = domain_spec_from_json(Json::parse(
        R"({"kind":"polygon","vertices":[[-1,-1],[1,-1],[0,1.5]]})"));
    CHECK(poly.kind == DomainSpec::Kind::Polygon);

    CHECK_THROWS_AS(domain_spec_from_json(Json::parse(R"({"kind":"blob"})")),
                    PreconditionError);

    // round trips preserve the spec
    auto j = domain_spec_to_json(disk);
    CHECK(domain_spec_from_json(j).radius == disk.radius);
}

TEST_CASE("measure csv round trip") {
    RngStream rng(5, 2);
    LerwSample s = sample_lerw(6, rng);
    OccupationMeasure mu = occupation_from_edges(s, 6, 9.0);
    TempFile f("measure.csv");
    write_measure_csv(f.path, mu);
    OccupationMeasure back = read_measure_csv(f.path);
    REQUIRE(back.atoms().size() == mu.atoms().size());
    CHECK(back.total_mass() == doctest::Approx(mu.total_mass()));
    std::string body = read_text_file(f.path);
    CHECK(body.rfind("x1,y1,x2,y2,mass\n", 0) == 0); // header row
}

TEST_CASE("raster output") {
    RngStream rng(7, 2);
    LerwSample s = sample_lerw(6, rng);
    OccupationMeasure mu = occupation_from_edges(s, 6, 9.0);
    TempFile f("raster.csv");
    write_measure_raster_csv(f.path, mu, 8, 1.25);
    std::string body = read_text_file(f.path);
    CHECK(body.rfind("i,j,x_center,y_center,mass\n", 0) == 0);
    CHECK(body.size() > 30);
}

TEST_CASE("manifest fields") {
    TempFile f("manifest.json");
    RunManifest m;
    m.command = "estimate-mn";
    m.config = Json{{"n", 4}};
    m.seed = 99;
    m.outputs = {"a.csv"};
    m.started_utc = utc_timestamp();
    m.finished_utc = utc_timestamp();
    m.wall_seconds = 0.25;
    write_manifest(f.path, m);
    Json j = Json::parse(read_text_file(f.path));
    CHECK(j["command"] == "estimate-mn");
    CHECK(j["seed"] == 99);
    CHECK(j["config"]["n"] == 4);
    CHECK(j.contains("version"));
    CHECK(j["outputs"][0] == "a.csv");
}

TEST_CASE("float formatting is stable") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.6817928305074292) == "1.68179283051");
}
