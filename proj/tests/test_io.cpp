#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "proxcor/errors.hpp"
#include "proxcor/io.hpp"
#include "proxcor/random.hpp"

using namespace proxcor;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path dir = fs::temp_directory_path() / ("proxcor-io-" + std::to_string(::getpid()));
    TempDir() { fs::create_directories(dir); }
    ~TempDir() { fs::remove_all(dir); }
    fs::path operator/(const std::string& f) const { return dir / f; }
};

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidParams;
}

} // namespace

TEST_CASE("doubles round trip through text") {
    Stream s(1, 0, 9);
    for (int i = 0; i < 1000; ++i) {
        const double x = s.gaussian() * std::pow(10.0, static_cast<int>(s.uniform() * 40) - 20);
        CHECK(std::stod(io::format_double(x)) == x);
    }
    CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("vector files round trip") {
    TempDir t;
    const std::vector<double> v{0.816, -0.408, -0.408, 1e-300, std::nextafter(1.0, 2.0)};
    io::write_vector_csv(t / "v.csv", v);
    CHECK(io::read_vector_csv(t / "v.csv") == v);
}

TEST_CASE("vector file errors") {
    TempDir t;
    write_text(t / "a.csv", "x\n1\n");
    write_text(t / "b.csv", "value\n1\nabc\n");
    write_text(t / "c.csv", "value\n1,2\n");
    CHECK(kind_of([&] { io::read_vector_csv(t / "a.csv"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { io::read_vector_csv(t / "b.csv"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { io::read_vector_csv(t / "c.csv"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { io::read_vector_csv(t / "missing.csv"); }) == ErrorKind::ParseError);
    try {
        io::read_vector_csv(t / "b.csv");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
}

TEST_CASE("ensemble files round trip") {
    TempDir t;
    io::EnsembleTable table{{"s1", "s2", "s3"}, {"a", "b"}, {{0.1, 0.2, -0.3}, {1.0 / 3, 2.0 / 3, -1.0}}};
    io::write_ensemble_csv(t / "e.csv", table);
    const auto back = io::read_ensemble_csv(t / "e.csv");
    CHECK(back.subjects == table.subjects);
    CHECK(back.ids == table.ids);
    CHECK(back.columns == table.columns);
}

TEST_CASE("ensemble file errors") {
    TempDir t;
    write_text(t / "dup.csv", "subject,a,a\n1,1,2\n");
    write_text(t / "ragged.csv", "subject,a,b\n1,1\n");
    write_text(t / "header.csv", "id,a\n1,1\n");
    CHECK(kind_of([&] { io::read_ensemble_csv(t / "dup.csv"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { io::read_ensemble_csv(t / "ragged.csv"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { io::read_ensemble_csv(t / "header.csv"); }) == ErrorKind::ParseError);
}

TEST_CASE("tag files round trip") {
    TempDir t;
    io::write_tags_csv(t / "t.csv", {{"a", "x"}, {"b", "y"}});
    const auto tags = io::read_tags_csv(t / "t.csv");
    CHECK(tags.size() == 2);
    CHECK(tags.at("b") == "y");
    write_text(t / "bad.csv", "id,tag\na,x\na,y\n");
    CHECK(kind_of([&] { io::read_tags_csv(t / "bad.csv"); }) == ErrorKind::ParseError);
}

TEST_CASE("curve file layout") {
    TempDir t;
    io::write_curve_csv(t / "c.csv", {{5, 0.25}, {6, 0.125}});
    std::ifstream in(t / "c.csv");
    std::string all((std::istreambuf_iterator<char>(in)), {});
    CHECK(all == "n,probability\n5,0.25\n6,0.125\n");
}
