#include <doctest.h>

#include <fstream>
#include <sstream>

#include "apollo/apkg.hpp"

using namespace apollo;

namespace {

std::string dump(Packing const& p)
{
    std::ostringstream out;
    save_packing(p, out);
    return out.str();
}

Packing parse(std::string const& text)
{
    std::istringstream in(text);
    return load_packing(in);
}

}  // namespace

TEST_CASE("round trips are field-for-field identical")
{
    GenerationOptions o;
    o.min_radius = 1e-3;
    auto a = generate_packing(circle_seed({-9, 14, 26, 27}), o);
    auto a2 = parse(dump(a));
    CHECK(a2 == a);
    CHECK(a2.element(5).exact.has_value());

    auto b = generate_packing(circle_seed({-1.5, 3, 3, 4.5}), o);
    CHECK(parse(dump(b)) == b);

    o.min_radius = 5e-3;
    o.region = Box{{0, 0, 0}, {1, 1, 0}};
    auto f = generate_packing(farey_strip_seed(), o);
    auto f2 = parse(dump(f));
    CHECK(f2 == f);
    CHECK(f2.region() == f.region());

    o.min_radius = 0.02;
    o.region = Box{{-0.5, -0.5, -1}, {1.5, 2.3, 2}};
    o.family_of = 0;
    auto s = generate_packing(soddy_base_seed(), o);
    auto s2 = parse(dump(s));
    CHECK(s2 == s);
    CHECK(s2.family_anchor() == 0);
    CHECK(dump(s2) == dump(s));

    o.family_of.reset();
    o.region.reset();
    o.max_elements = 30;
    try {
        generate_packing(sphere_seed({-1, 2, 2, 3, 3}), o);
    } catch (CapExceeded const& e) {
        auto p2 = parse(dump(e.partial()));
        CHECK(p2.partial());
        CHECK(p2 == e.partial());
    }
}

TEST_CASE("file round trip")
{
    GenerationOptions o;
    o.min_radius = 0.01;
    auto p = generate_packing(circle_seed({-1, 2, 2, 3}), o);
    auto path = std::filesystem::temp_directory_path() / "apollo_roundtrip.apkg";
    save_packing(p, path);
    CHECK(load_packing(path) == p);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_packing(path), Error);
}

TEST_CASE("hand-written (-1,2,2,3) fixture")
{
    auto p = load_packing(std::filesystem::path(APOLLO_TEST_DATA) / "m1223.apkg");
    REQUIRE(p.size() == 4);
    Quadruple q;
    for (int i = 0; i < 4; ++i) {
        auto c = p.circle(i);
        q.b[i] = c.curvature();
        q.w[i] = c.curvature_center();
    }
    CHECK(descartes_residual(q) == 0.0);
    CHECK(center_residual(q) < 1e-12);
    CHECK(max_tangency_defect(p) < 1e-15);
    CHECK(p.element(3).exact == 3);
    CHECK(p.circle(0).orientation() == Orientation::outer);
}

TEST_CASE("truncated input names the offending line")
{
    GenerationOptions o;
    o.min_radius = 0.05;
    auto text = dump(generate_packing(circle_seed({-1, 2, 2, 3}), o));

    // cut at every line boundary and inside lines
    std::size_t lines = std::count(text.begin(), text.end(), '\n');
    for (std::size_t cut = 1; cut < text.size(); cut += 7) {
        std::string part = text.substr(0, cut);
        std::size_t full_lines = std::count(part.begin(), part.end(), '\n');
        try {
            parse(part);
            // a cut right after a complete tangency line may still be short
            FAIL("truncated input parsed at cut " << cut);
        } catch (ParseError const& e) {
            CHECK(e.line() >= 1);
            CHECK(e.line() <= full_lines + 1);
            CHECK(std::string(e.what()).find("line ") == 0);
        }
    }
    CHECK(lines > 10);
}

TEST_CASE("malformed input")
{
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("APKG 2 2 0.1\nTANGENCY\n"), VersionError);
    CHECK_THROWS_AS(parse("PKG 1 2 0.1\n"), ParseError);
    CHECK_THROWS_AS(parse("APKG 1 4 0.1\n"), ParseError);

    std::string good = "APKG 1 2 0.5\n0 circle 2 0 0 0 -1 -\nTANGENCY\n0:\n";
    CHECK(parse(good).size() == 1);
    try {
        parse("APKG 1 2 0.5\n0 circle 2 0 zero 0 -1 -\nTANGENCY\n0:\n");
        FAIL("expected ParseError");
    } catch (ParseError const& e) {
        CHECK(e.line() == 2);
    }
    try {
        parse("APKG 1 2 0.5\n0 circle 2 0 0 0 -1 -\n1 circle 2 2 0 0 -1 -\nTANGENCY\n0: 1\n1:\n");
        FAIL("expected ParseError");
    } catch (ParseError const& e) {
        CHECK(std::string(e.what()).find("symmetric") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("APKG 1 2 0.5\n0 blob 2 0 0 0 -1 -\nTANGENCY\n0:\n"), ParseError);
    CHECK_THROWS_AS(parse("APKG 1 2 0.5\n0 circle 2 0 0 1 -1 -\nTANGENCY\n0:\n"), ParseError);
    CHECK_THROWS_AS(parse("APKG 1 2 0.5\n0 circle 2 0 0 0 -1 -\nTANGENCY\n0:\nextra\n"), ParseError);
}
