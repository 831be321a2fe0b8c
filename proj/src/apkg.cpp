#include "apollo/apkg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace apollo {

namespace {

constexpr int kVersion = 1;

void put(std::string& s, double x)
{
    char buf[32];
    int n = std::snprintf(buf, sizeof buf, " %.17g", x);
    s.append(buf, n);
}

void put(std::string& s, long long x)
{
    char buf[24];
    int n = std::snprintf(buf, sizeof buf, " %lld", x);
    s.append(buf, n);
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Next line, or false at end of input.
    bool next()
    {
        if (!std::getline(in_, text_))
            return false;
        ++line_;
        if (in_.eof())
            fail("truncated line (missing newline)");
        tokens_ = split(text_);
        return true;
    }

    std::size_t line() const { return line_; }
    std::vector<std::string_view> const& tokens() const { return tokens_; }

    [[noreturn]] void fail(std::string const& what) const { throw ParseError(line_, what); }

    double real(std::string_view t) const
    {
        double v = 0.0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || p != t.data() + t.size() || !std::isfinite(v))
            fail("expected a number, got '" + std::string(t) + "'");
        return v;
    }

    long long integer(std::string_view t) const
    {
        long long v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || p != t.data() + t.size())
            fail("expected an integer, got '" + std::string(t) + "'");
        return v;
    }

private:
    std::istream& in_;
    std::string text_;
    std::vector<std::string_view> tokens_;
    std::size_t line_ = 0;
};

}  // namespace

void save_packing(Packing const& p, std::ostream& out)
{
    std::string s = "APKG";
    put(s, static_cast<long long>(kVersion));
    put(s, static_cast<long long>(p.dim()));
    put(s, p.min_radius());
    s += '\n';
    if (p.region()) {
        s += "REGION";
        for (int d = 0; d < p.dim(); ++d)
            put(s, p.region()->lo[d]);
        for (int d = 0; d < p.dim(); ++d)
            put(s, p.region()->hi[d]);
        s += '\n';
    }
    if (p.family_anchor()) {
        s += "FAMILY";
        put(s, static_cast<long long>(*p.family_anchor()));
        s += '\n';
    }
    if (p.partial())
        s += "PARTIAL\n";
    out << s;

    for (std::size_t i = 0; i < p.size(); ++i) {
        auto const& e = p.element(static_cast<int>(i));
        s.clear();
        s += std::to_string(i);
        if (p.dim() == 2) {
            s += e.flat ? " line" : " circle";
            put(s, e.curvature);
            put(s, e.center.x);
            put(s, e.center.y);
            if (e.flat) {
                put(s, e.normal.x);
                put(s, e.normal.y);
            }
        } else {
            s += e.flat ? " plane" : " sphere";
            put(s, e.curvature);
            put(s, e.center.x);
            put(s, e.center.y);
            put(s, e.center.z);
            if (e.flat) {
                put(s, e.normal.x);
                put(s, e.normal.y);
                put(s, e.normal.z);
            }
        }
        put(s, static_cast<long long>(e.depth));
        put(s, static_cast<long long>(e.parent));
        s += ' ';
        s += e.word.empty() ? "-" : e.word;
        s += '\n';
        out << s;
    }

    out << "TANGENCY\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        s = std::to_string(i) + ":";
        for (int j : p.neighbors(static_cast<int>(i)))
            put(s, static_cast<long long>(j));
        s += '\n';
        out << s;
    }
    if (!out)
        throw Error("failed to write packing");
}

void save_packing(Packing const& p, std::filesystem::path const& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    save_packing(p, out);
}

Packing load_packing(std::istream& in)
{
    Reader r(in);
    if (!r.next())
        throw ParseError(1, "empty input, expected an APKG header");
    auto const& head = r.tokens();
    if (head.size() != 4 || head[0] != "APKG")
        r.fail("expected header 'APKG <version> <dim> <min_radius>'");
    long long version = r.integer(head[1]);
    if (version != kVersion)
        throw VersionError("unsupported APKG version " + std::to_string(version) + " (expected "
                           + std::to_string(kVersion) + ")");
    long long dim = r.integer(head[2]);
    if (dim != 2 && dim != 3)
        r.fail("dimension must be 2 or 3");
    double min_radius = r.real(head[3]);

    std::optional<Box> region;
    std::optional<int> family;
    bool partial = false;
    std::vector<Element> elements;
    bool integral = true;

    for (;;) {
        if (!r.next())
            throw ParseError(r.line() + 1, "unexpected end of input, expected TANGENCY");
        auto const& t = r.tokens();
        if (t.empty())
            r.fail("empty line");
        if (t[0] == "TANGENCY") {
            if (t.size() != 1)
                r.fail("trailing tokens after TANGENCY");
            break;
        }
        if (t[0] == "REGION") {
            if (!elements.empty() || region)
                r.fail("REGION must precede the elements and appear once");
            if (t.size() != 1 + 2 * static_cast<std::size_t>(dim))
                r.fail("REGION needs " + std::to_string(2 * dim) + " values");
            Box b;
            for (int d = 0; d < dim; ++d) {
                b.lo[d] = r.real(t[1 + d]);
                b.hi[d] = r.real(t[1 + dim + d]);
            }
            region = b;
            continue;
        }
        if (t[0] == "FAMILY") {
            if (!elements.empty() || family || t.size() != 2)
                r.fail("malformed FAMILY line");
            family = static_cast<int>(r.integer(t[1]));
            continue;
        }
        if (t[0] == "PARTIAL") {
            if (!elements.empty() || t.size() != 1)
                r.fail("malformed PARTIAL line");
            partial = true;
            continue;
        }

        if (t.size() < 2)
            r.fail("malformed element line");
        if (r.integer(t[0]) != static_cast<long long>(elements.size()))
            r.fail("element ids must be consecutive from 0");
        std::string_view kind = t[1];
        bool flat;
        std::size_t coords;
        if (dim == 2 && kind == "circle") {
            flat = false;
            coords = 2;
        } else if (dim == 2 && kind == "line") {
            flat = true;
            coords = 4;
        } else if (dim == 3 && kind == "sphere") {
            flat = false;
            coords = 3;
        } else if (dim == 3 && kind == "plane") {
            flat = true;
            coords = 6;
        } else {
            r.fail("unknown element kind '" + std::string(kind) + "' for dimension " + std::to_string(dim));
        }
        if (t.size() != 2 + 1 + coords + 3)
            r.fail("element line has " + std::to_string(t.size()) + " fields, expected "
                   + std::to_string(6 + coords));

        Element e;
        e.flat = flat;
        e.curvature = r.real(t[2]);
        std::array<double, 6> c{};
        for (std::size_t k = 0; k < coords; ++k)
            c[k] = r.real(t[3 + k]);
        if (dim == 2) {
            e.center = {c[0], c[1], 0.0};
            if (flat)
                e.normal = {c[2], c[3], 0.0};
        } else {
            e.center = {c[0], c[1], c[2]};
            if (flat)
                e.normal = {c[3], c[4], c[5]};
        }
        if (flat && (e.curvature != 0.0 || std::abs(norm(e.normal) - 1.0) > 1e-12))
            r.fail("flat element needs curvature 0 and a unit normal");
        if (!flat && e.curvature == 0.0)
            r.fail("round element with zero curvature");
        std::size_t k = 3 + coords;
        e.depth = static_cast<int>(r.integer(t[k]));
        e.parent = static_cast<int>(r.integer(t[k + 1]));
        if (e.parent < -1 || e.parent >= static_cast<int>(elements.size()))
            r.fail("parent must be -1 or an earlier id");
        if (t[k + 2] != "-") {
            e.word = std::string(t[k + 2]);
            for (char ch : e.word)
                if (ch < '0' || ch > static_cast<char>('0' + dim + 1))
                    r.fail("reflection word holds an invalid slot '" + std::string(1, ch) + "'");
        }
        if (e.depth != static_cast<int>(e.word.size()))
            r.fail("depth does not match the word length");
        integral = integral && e.curvature == std::nearbyint(e.curvature) && std::abs(e.curvature) < 0x1p52;
        elements.push_back(std::move(e));
    }

    if (integral) {
        for (auto& e : elements)
            e.exact = static_cast<std::int64_t>(e.curvature);
    }

    std::vector<std::vector<int>> adjacency(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (!r.next())
            throw ParseError(r.line() + 1, "unexpected end of input, expected tangency list for id "
                                               + std::to_string(i));
        auto const& t = r.tokens();
        if (t.empty() || t[0] != std::to_string(i) + ":")
            r.fail("expected '" + std::to_string(i) + ":'");
        for (std::size_t k = 1; k < t.size(); ++k) {
            long long j = r.integer(t[k]);
            if (j < 0 || j >= static_cast<long long>(elements.size()) || j == static_cast<long long>(i))
                r.fail("invalid neighbor id " + std::to_string(j));
            if (!adjacency[i].empty() && adjacency[i].back() >= j)
                r.fail("neighbor ids must be strictly increasing");
            adjacency[i].push_back(static_cast<int>(j));
        }
    }
    while (r.next()) {
        if (!r.tokens().empty())
            r.fail("trailing content after the tangency section");
    }
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
        for (int j : adjacency[i]) {
            if (!std::binary_search(adjacency[j].begin(), adjacency[j].end(), static_cast<int>(i)))
                throw ParseError(0, "tangency list is not symmetric (" + std::to_string(i) + ", "
                                        + std::to_string(j) + ")");
        }
    }

    Packing p(static_cast<int>(dim), std::move(elements), std::move(adjacency), min_radius, region, family);
    if (partial)
        p.mark_partial();
    return p;
}

Packing load_packing(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    return load_packing(in);
}

}  // namespace apollo
