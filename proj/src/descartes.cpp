#include "apollo/descartes.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace apollo {

namespace {

constexpr double kIdentityTol = 1e-9;
constexpr double kSeedTangencyTol = 1e-9;

template<std::size_t N>
double identity_residual(std::array<double, N> const& b, double n)
{
    double s = 0.0, s2 = 0.0;
    for (double x : b) {
        s += x;
        s2 += x * x;
    }
    return std::abs(s * s - n * s2) / std::max(s2, std::numeric_limits<double>::min());
}

// One coordinate of the curvature-center relations.
template<std::size_t N>
double coordinate_residual(std::array<double, N> const& b, std::array<double, N> const& wj, double n)
{
    double sb = 0, sw = 0, sww = 0, sbw = 0, sbb = 0;
    for (std::size_t i = 0; i < N; ++i) {
        sb += b[i];
        sw += wj[i];
        sww += wj[i] * wj[i];
        sbw += b[i] * wj[i];
        sbb += b[i] * b[i];
    }
    double quad = std::abs(sww - sw * sw / n - 2.0) / (sww + 2.0);
    double mixed = std::abs(sbw - sb * sw / n) / std::sqrt((sbb + 1.0) * (sww + 1.0));
    return std::max(quad, mixed);
}

Vec3 to_vec(Complex z) { return {z.real(), z.imag(), 0.0}; }
Complex to_complex(Vec3 v) { return {v.x, v.y}; }

//---------------------------------------------------------------------------//
// Seed placement helpers
//---------------------------------------------------------------------------//

// Signed radius 1/b.
double signed_radius(double b) { return 1.0 / b; }

// Center distance of two tangent round elements.
double tangent_distance(double b1, double b2)
{
    return std::abs(signed_radius(b1) + signed_radius(b2));
}

// Intersections of |p - c1| = r1 and |p - c2| = r2 in the plane.
std::vector<Complex> circle_intersections(Complex c1, double r1, Complex c2, double r2)
{
    Complex delta = c2 - c1;
    double d = std::abs(delta);
    if (d == 0.0)
        return {};
    double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    double h2 = r1 * r1 - a * a;
    if (h2 < -1e-12 * r1 * r1)
        return {};
    // Near-degenerate configurations: rounding noise in h2 would otherwise
    // become a sqrt-sized offset. Snapping moves distances only by O(h^2).
    double h = h2 < 1e-13 * r1 * r1 ? 0.0 : std::sqrt(h2);
    Complex u = delta / d;
    Complex m = c1 + a * u;
    Complex perp = u * Complex(0.0, 1.0);
    return {m + h * perp, m - h * perp};
}

// Points at distances d[i] from p[i], i = 0..2.
std::vector<Vec3> trilaterate(std::array<Vec3, 3> p, std::array<double, 3> d)
{
    Vec3 ex = p[1] - p[0];
    double dx = norm(ex);
    if (dx == 0.0)
        return {};
    ex = ex / dx;
    double i = dot(ex, p[2] - p[0]);
    Vec3 ey = (p[2] - p[0]) - i * ex;
    double ny = norm(ey);
    if (ny == 0.0)
        return {};
    ey = ey / ny;
    Vec3 ez = cross(ex, ey);
    double j = dot(ey, p[2] - p[0]);
    double x = (d[0] * d[0] - d[1] * d[1] + dx * dx) / (2.0 * dx);
    double y = (d[0] * d[0] - d[2] * d[2] + i * i + j * j - 2.0 * i * x) / (2.0 * j);
    double z2 = d[0] * d[0] - x * x - y * y;
    if (z2 < -1e-12 * d[0] * d[0])
        return {};
    double z = z2 < 1e-13 * d[0] * d[0] ? 0.0 : std::sqrt(z2);
    Vec3 base = p[0] + x * ex + y * ey;
    return {base + z * ez, base - z * ez};
}

GeneralizedCircle round_circle(Complex center, double b)
{
    return GeneralizedCircle::circle(center, 1.0 / std::abs(b),
                                     b > 0 ? Orientation::inner : Orientation::outer);
}

GeneralizedSphere round_sphere(Vec3 center, double b)
{
    return GeneralizedSphere::sphere(center, 1.0 / std::abs(b),
                                     b > 0 ? Orientation::inner : Orientation::outer);
}

template<class G>
double seed_defect(std::vector<G> const& g)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            double scale = std::max(g[i].radius(), g[j].radius());
            double d = tangency_defect(g[i], g[j]);
            worst = std::max(worst, scale > 0 ? d / scale : d);
        }
    }
    return worst;
}

// Picks the candidate minimizing the worst tangency defect against `placed`.
template<class G, class Make>
G best_candidate(std::vector<G> const& placed, auto const& candidates, Make make)
{
    std::optional<G> best;
    double best_defect = std::numeric_limits<double>::infinity();
    for (auto const& c : candidates) {
        G g = make(c);
        double worst = 0.0;
        for (auto const& p : placed) {
            double scale = std::max(p.radius(), g.radius());
            worst = std::max(worst, tangency_defect(p, g) / scale);
        }
        if (worst < best_defect) {
            best_defect = worst;
            best = g;
        }
    }
    if (!best)
        throw PreconditionError("bends do not describe a tangent configuration");
    return *best;
}

void require_bends(std::span<const double> bends)
{
    for (double b : bends) {
        if (!std::isfinite(b))
            throw PreconditionError("bends must be finite");
    }
    if (std::count_if(bends.begin(), bends.end(), [](double b) { return b < 0; }) > 1)
        throw PreconditionError("at most one bend may be negative");
}

std::optional<std::int64_t> exact_integer(double b)
{
    if (b == std::nearbyint(b) && std::abs(b) < 0x1p52)
        return static_cast<std::int64_t>(b);
    return std::nullopt;
}

//---------------------------------------------------------------------------//
// Generation
//---------------------------------------------------------------------------//

struct CellKey {
    std::int64_t x, y, z;
    bool operator==(CellKey const&) const = default;
};

struct CellHash {
    std::size_t operator()(CellKey const& k) const noexcept
    {
        auto mix = [](std::uint64_t v) {
            v += 0x9e3779b97f4a7c15ULL;
            v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
            v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
            return v ^ (v >> 31);
        };
        return mix(static_cast<std::uint64_t>(k.x) ^ mix(static_cast<std::uint64_t>(k.y)
                                                         ^ mix(static_cast<std::uint64_t>(k.z))));
    }
};

template<std::size_t N>
struct TupleHash {
    std::size_t operator()(std::array<int, N> const& a) const noexcept
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (int v : a) {
            h ^= static_cast<std::uint32_t>(v);
            h *= 1099511628211ULL;
        }
        return h;
    }
};

struct SeedBall {
    bool flat;
    double b;
    Vec3 center;
    Vec3 normal;
};

// Reflection closure over tuples of N mutually tangent balls in dimension
// N - 2. Circles use reduced words, which never revisit a tuple; spheres
// dedup tuples and elements by hashing since that group has relations.
template<std::size_t N>
class Generator {
public:
    static constexpr int kDim = static_cast<int>(N) - 2;
    static constexpr double kFactor = N == 4 ? 2.0 : 1.0;

    Generator(std::vector<SeedBall> const& seed, GenerationOptions const& opts)
        : opts_(opts), hashed_(N == 5)
    {
        if (!(opts.min_radius > 0.0))
            throw PreconditionError("min_radius must be positive");
        if (seed.size() != N)
            throw PreconditionError("seed must hold " + std::to_string(N) + " elements");
        if (opts.family_of && (*opts.family_of < 0 || *opts.family_of >= static_cast<int>(N)))
            throw PreconditionError("family_of must name a seed slot");
        cell_ = opts.min_radius;

        std::array<double, N> bs{};
        exact_ = true;
        for (std::size_t i = 0; i < N; ++i) {
            bs[i] = seed[i].b;
            exact_ = exact_ && exact_integer(seed[i].b).has_value();
        }
        double res = identity_residual(bs, kDim);
        if (res > kIdentityTol)
            throw PreconditionError("seed violates the curvature identity (relative defect "
                                    + std::to_string(res) + ")");
        if (exact_) {
            std::int64_t s = 0, s2 = 0;
            for (double b : bs) {
                s += static_cast<std::int64_t>(b);
                s2 += static_cast<std::int64_t>(b) * static_cast<std::int64_t>(b);
            }
            exact_ = s * s == kDim * s2;
        }

        std::array<int, N> root{};
        for (std::size_t i = 0; i < N; ++i) {
            Element e;
            e.flat = seed[i].flat;
            e.curvature = seed[i].flat ? 0.0 : seed[i].b;
            e.center = seed[i].center;
            e.normal = seed[i].flat ? seed[i].normal : Vec3{};
            if (exact_)
                e.exact = static_cast<std::int64_t>(seed[i].b);
            Vec3 w = e.flat ? -e.normal : e.curvature * e.center;
            root[i] = add_element(std::move(e), w);
        }
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (i != j)
                    adj_[root[i]].push_back(root[j]);
        push_node(root, -1, std::string{});
    }

    Packing run()
    {
        while (!queue_.empty()) {
            Node node = std::move(queue_.front());
            queue_.pop_front();
            expand(node);
        }
        return finish(false);
    }

private:
    struct Node {
        std::array<int, N> ids;
        int last;
        std::string word;
    };

    int add_element(Element e, Vec3 w)
    {
        if (elems_.size() >= opts_.max_elements)
            throw CapExceeded(opts_.max_elements, finish(true));
        int id = static_cast<int>(elems_.size());
        next_.push_back(-1);
        if (hashed_)
            index_element(e, id);
        elems_.push_back(std::move(e));
        w_.push_back(w);
        adj_.emplace_back();
        return id;
    }

    CellKey cell_of(Vec3 c) const
    {
        return {static_cast<std::int64_t>(std::floor(c.x / cell_)),
                static_cast<std::int64_t>(std::floor(c.y / cell_)),
                static_cast<std::int64_t>(std::floor(c.z / cell_))};
    }

    void index_element(Element const& e, int id)
    {
        if (e.flat) {
            flats_.push_back(id);
            return;
        }
        auto key = cell_of(e.center);
        auto [it, inserted] = cells_.try_emplace(key, id);
        if (!inserted) {
            next_[id] = it->second;
            it->second = id;
        }
    }

    std::optional<int> find_element(Element const& e) const
    {
        if (e.flat) {
            for (int id : flats_) {
                Element const& f = elems_[id];
                if (norm(f.normal - e.normal) < 1e-9
                    && std::abs(dot(f.normal, f.center - e.center)) < 1e-9)
                    return id;
            }
            return std::nullopt;
        }
        CellKey k = cell_of(e.center);
        double r = e.radius();
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (std::int64_t dz = -1; dz <= 1; ++dz) {
                    auto it = cells_.find({k.x + dx, k.y + dy, k.z + dz});
                    if (it == cells_.end())
                        continue;
                    for (int id = it->second; id >= 0; id = next_[id]) {
                        Element const& f = elems_[id];
                        if (f.flat)
                            continue;
                        if (std::abs(f.curvature - e.curvature) <= 1e-9 * std::abs(e.curvature)
                            && norm(f.center - e.center) <= 1e-6 * r)
                            return id;
                    }
                }
            }
        }
        return std::nullopt;
    }

    bool in_region(Element const& e) const
    {
        if (!opts_.region || e.flat)
            return true;
        double r = e.radius();
        std::array<double, 3> c{e.center.x, e.center.y, e.center.z};
        for (int d = 0; d < kDim; ++d) {
            if (c[d] + r < opts_.region->lo[d] || c[d] - r > opts_.region->hi[d])
                return false;
        }
        return true;
    }

    void push_node(std::array<int, N> const& ids, int last, std::string word)
    {
        if (hashed_) {
            auto key = ids;
            std::sort(key.begin(), key.end());
            if (!visited_.insert(key).second)
                return;
        }
        if (opts_.on_tuple) {
            std::array<double, N> b{};
            std::array<Vec3, N> w{};
            for (std::size_t i = 0; i < N; ++i) {
                b[i] = elems_[ids[i]].curvature;
                w[i] = w_[ids[i]];
            }
            opts_.on_tuple(TupleView{ids, b, w});
        }
        queue_.push_back(Node{ids, last, std::move(word)});
    }

    void expand(Node const& node)
    {
        for (int s = 0; s < static_cast<int>(N); ++s) {
            if (s == node.last)
                continue;
            if (opts_.family_of && s == *opts_.family_of)
                continue;

            double sb = 0.0;
            Vec3 sw{};
            std::int64_t se = 0;
            for (int j = 0; j < static_cast<int>(N); ++j) {
                if (j == s)
                    continue;
                Element const& ej = elems_[node.ids[j]];
                sb += ej.curvature;
                sw = sw + w_[node.ids[j]];
                if (exact_)
                    se += *ej.exact;
            }
            int old_id = node.ids[s];
            Element const& old = elems_[old_id];
            double b = kFactor * sb - old.curvature;
            Vec3 w = kFactor * sw - w_[old_id];

            Element e;
            if (exact_) {
                std::int64_t eb = static_cast<std::int64_t>(kFactor) * se - *old.exact;
                e.exact = eb;
                b = static_cast<double>(eb);
            }
            double wn = norm(w);
            if (std::abs(b) <= 1e-12 * wn) {
                e.flat = true;
                e.curvature = 0.0;
                e.normal = -w / wn;
                e.center = flat_base(node, s, e.normal);
            } else {
                e.curvature = b;
                e.center = w / b;
                if (e.radius() < opts_.min_radius)
                    continue;
            }
            if (!in_region(e))
                continue;
            e.parent = old_id;
            e.word = node.word + static_cast<char>('0' + s);
            e.depth = static_cast<int>(e.word.size());

            std::optional<int> existing = hashed_ ? find_element(e) : std::nullopt;
            int id = existing ? *existing : add_element(std::move(e), w);
            for (int j = 0; j < static_cast<int>(N); ++j) {
                if (j != s)
                    link(id, node.ids[j]);
            }
            auto ids = node.ids;
            ids[s] = id;
            push_node(ids, s, node.word + static_cast<char>('0' + s));
        }
    }

    Vec3 flat_base(Node const& node, int s, Vec3 inward) const
    {
        for (int j = 0; j < static_cast<int>(N); ++j) {
            Element const& ej = elems_[node.ids[j]];
            if (j != s && !ej.flat && ej.curvature > 0)
                return ej.center - ej.radius() * inward;
        }
        throw Error("cannot place a flat element without a round neighbor");
    }

    void link(int a, int b)
    {
        adj_[a].push_back(b);
        adj_[b].push_back(a);
    }

    Packing finish(bool partial)
    {
        auto adj = adj_;
        for (auto& list : adj) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
        std::optional<int> anchor;
        if (opts_.family_of)
            anchor = *opts_.family_of;
        Packing p(kDim, elems_, std::move(adj), opts_.min_radius, opts_.region, anchor);
        if (partial)
            p.mark_partial();
        return p;
    }

    GenerationOptions const& opts_;
    bool hashed_;
    bool exact_ = false;
    double cell_ = 1.0;
    std::vector<Element> elems_;
    std::vector<Vec3> w_;
    std::vector<std::vector<int>> adj_;
    std::deque<Node> queue_;
    std::unordered_set<std::array<int, N>, TupleHash<N>> visited_;
    std::unordered_map<CellKey, int, CellHash> cells_;
    std::vector<int> next_;
    std::vector<int> flats_;
};

void verify_tangency(Packing const& p)
{
    double defect = max_tangency_defect(p);
    if (defect > 1e-9)
        throw Error("tangency verification failed: relative defect "
                    + std::to_string(defect));
}

}  // namespace

//---------------------------------------------------------------------------//
// Curvature algebra
//---------------------------------------------------------------------------//

double descartes_residual(Quadruple const& q) { return identity_residual(q.b, 2.0); }
double descartes_residual(Quintuple const& q) { return identity_residual(q.b, 3.0); }

double center_residual(Quadruple const& q)
{
    std::array<double, 4> re{}, im{};
    for (int i = 0; i < 4; ++i) {
        re[i] = q.w[i].real();
        im[i] = q.w[i].imag();
    }
    return std::max(coordinate_residual(q.b, re, 2.0), coordinate_residual(q.b, im, 2.0));
}

double center_residual(Quintuple const& q)
{
    std::array<double, 5> x{}, y{}, z{};
    for (int i = 0; i < 5; ++i) {
        x[i] = q.w[i].x;
        y[i] = q.w[i].y;
        z[i] = q.w[i].z;
    }
    return std::max({coordinate_residual(q.b, x, 3.0), coordinate_residual(q.b, y, 3.0),
                     coordinate_residual(q.b, z, 3.0)});
}

std::pair<double, double> fourth_curvature(double b1, double b2, double b3)
{
    double disc = b1 * b2 + b2 * b3 + b3 * b1;
    if (disc < 0.0)
        throw PreconditionError("no real fourth curvature: b1 b2 + b2 b3 + b3 b1 < 0");
    double s = b1 + b2 + b3;
    double root = 2.0 * std::sqrt(disc);
    return {s + root, s - root};
}

std::pair<double, double> fifth_curvature(double b1, double b2, double b3, double b4)
{
    double s = b1 + b2 + b3 + b4;
    double t = b1 * b1 + b2 * b2 + b3 * b3 + b4 * b4;
    double disc = 3.0 * s * s - 6.0 * t;
    if (disc < -1e-12 * s * s)
        throw PreconditionError("no real fifth curvature for these four spheres");
    double root = std::sqrt(std::max(0.0, disc));
    return {0.5 * (s + root), 0.5 * (s - root)};
}

Quadruple reflect(Quadruple const& q, int index)
{
    if (index < 0 || index > 3)
        throw PreconditionError("reflect: index out of range");
    Quadruple r = q;
    double sb = 0.0;
    Complex sw{};
    for (int j = 0; j < 4; ++j) {
        if (j != index) {
            sb += q.b[j];
            sw += q.w[j];
        }
    }
    r.b[index] = 2.0 * sb - q.b[index];
    r.w[index] = 2.0 * sw - q.w[index];
    return r;
}

Quintuple reflect(Quintuple const& q, int index)
{
    if (index < 0 || index > 4)
        throw PreconditionError("reflect: index out of range");
    Quintuple r = q;
    double sb = 0.0;
    Vec3 sw{};
    for (int j = 0; j < 5; ++j) {
        if (j != index) {
            sb += q.b[j];
            sw = sw + q.w[j];
        }
    }
    r.b[index] = sb - q.b[index];
    r.w[index] = sw - q.w[index];
    return r;
}

//---------------------------------------------------------------------------//
// Seeds
//---------------------------------------------------------------------------//

std::vector<GeneralizedCircle> circle_seed(std::array<double, 4> bends)
{
    require_bends(bends);
    if (identity_residual(bends, 2.0) > kIdentityTol)
        throw PreconditionError("bends violate the Descartes relation");

    std::vector<int> flat, round;
    for (int i = 0; i < 4; ++i)
        (bends[i] == 0.0 ? flat : round).push_back(i);

    std::vector<std::optional<GeneralizedCircle>> out(4);
    if (flat.size() == 2) {
        double b = bends[round[0]];
        if (b != bends[round[1]] || b <= 0.0)
            throw PreconditionError("two lines require two equal positive bends");
        double r = 1.0 / b;
        out[flat[0]] = GeneralizedCircle::line(0.0, Complex(0.0, 1.0));
        out[flat[1]] = GeneralizedCircle::line(Complex(0.0, 2.0 * r), Complex(0.0, -1.0));
        out[round[0]] = GeneralizedCircle::circle(Complex(0.0, r), r);
        out[round[1]] = GeneralizedCircle::circle(Complex(2.0 * r, r), r);
    } else if (flat.size() == 1) {
        for (int i : round) {
            if (bends[i] <= 0.0)
                throw PreconditionError("circles beside a line must have positive bends");
        }
        out[flat[0]] = GeneralizedCircle::line(0.0, Complex(0.0, 1.0));
        double r0 = 1.0 / bends[round[0]], r1 = 1.0 / bends[round[1]], r2 = 1.0 / bends[round[2]];
        Complex c0(0.0, r0), c1(2.0 * std::sqrt(r0 * r1), r1);
        out[round[0]] = GeneralizedCircle::circle(c0, r0);
        out[round[1]] = GeneralizedCircle::circle(c1, r1);
        double dx = 2.0 * std::sqrt(r0 * r2);
        std::vector<GeneralizedCircle> placed{*out[flat[0]], *out[round[0]], *out[round[1]]};
        std::vector<Complex> cands{Complex(dx, r2), Complex(-dx, r2)};
        out[round[2]] = best_candidate(placed, cands, [&](Complex c) {
            return GeneralizedCircle::circle(c, r2);
        });
    } else if (flat.empty()) {
        // Put a negative bend first so the others sit inside it.
        std::array<int, 4> order{0, 1, 2, 3};
        std::stable_partition(order.begin(), order.end(), [&](int i) { return bends[i] < 0; });
        double b0 = bends[order[0]], b1 = bends[order[1]], b2 = bends[order[2]], b3 = bends[order[3]];
        Complex c0 = 0.0;
        Complex c1 = tangent_distance(b0, b1);
        auto c2s = circle_intersections(c0, tangent_distance(b0, b2), c1, tangent_distance(b1, b2));
        if (c2s.empty())
            throw PreconditionError("bends do not describe a tangent configuration");
        Complex c2 = c2s[0].imag() >= 0 ? c2s[0] : c2s[1];
        std::vector<GeneralizedCircle> placed{round_circle(c0, b0), round_circle(c1, b1),
                                              round_circle(c2, b2)};
        // Complex Descartes: w3 = w0 + w1 + w2 +- 2 sqrt(w0 w1 + w1 w2 + w2 w0).
        Complex w0 = b0 * c0, w1 = b1 * c1, w2 = b2 * c2;
        Complex root = 2.0 * std::sqrt(w0 * w1 + w1 * w2 + w2 * w0);
        std::vector<Complex> cands{(w0 + w1 + w2 + root) / b3, (w0 + w1 + w2 - root) / b3};
        GeneralizedCircle g3 = best_candidate(placed, cands, [&](Complex c) {
            return round_circle(c, b3);
        });
        out[order[0]] = placed[0];
        out[order[1]] = placed[1];
        out[order[2]] = placed[2];
        out[order[3]] = g3;
    } else {
        throw PreconditionError("at most two bends may be zero");
    }

    std::vector<GeneralizedCircle> seed;
    for (auto& g : out)
        seed.push_back(*g);
    if (seed_defect(seed) > kSeedTangencyTol)
        throw PreconditionError("bends do not describe a tangent configuration");
    return seed;
}

std::vector<GeneralizedSphere> sphere_seed(std::array<double, 5> bends)
{
    require_bends(bends);
    if (identity_residual(bends, 3.0) > kIdentityTol)
        throw PreconditionError("bends violate the Soddy-Gosset relation");

    std::vector<int> flat, round;
    for (int i = 0; i < 5; ++i)
        (bends[i] == 0.0 ? flat : round).push_back(i);

    std::vector<std::optional<GeneralizedSphere>> out(5);
    if (flat.size() == 2) {
        double b = bends[round[0]];
        if (b <= 0.0 || bends[round[1]] != b || bends[round[2]] != b)
            throw PreconditionError("two planes require three equal positive bends");
        double r = 1.0 / b;
        out[flat[0]] = GeneralizedSphere::plane({0, 0, 0}, {0, 0, 1});
        out[flat[1]] = GeneralizedSphere::plane({0, 0, 2 * r}, {0, 0, -1});
        out[round[0]] = GeneralizedSphere::sphere({0, 0, r}, r);
        out[round[1]] = GeneralizedSphere::sphere({2 * r, 0, r}, r);
        out[round[2]] = GeneralizedSphere::sphere({r, std::sqrt(3.0) * r, r}, r);
    } else if (flat.size() == 1) {
        for (int i : round) {
            if (bends[i] <= 0.0)
                throw PreconditionError("spheres beside a plane must have positive bends");
        }
        auto rad = [&](int k) { return 1.0 / bends[round[k]]; };
        GeneralizedSphere plane = GeneralizedSphere::plane({0, 0, 0}, {0, 0, 1});
        out[flat[0]] = plane;
        // Tangent spheres of radii r, s touching z = 0 have feet 2 sqrt(rs) apart.
        auto foot = [&](int a, int b) { return 2.0 * std::sqrt(rad(a) * rad(b)); };
        Complex f0 = 0.0, f1 = foot(0, 1);
        auto f2s = circle_intersections(f0, foot(0, 2), f1, foot(1, 2));
        if (f2s.empty())
            throw PreconditionError("bends do not describe a tangent configuration");
        Complex f2 = f2s[0].imag() >= 0 ? f2s[0] : f2s[1];
        std::vector<GeneralizedSphere> placed{plane};
        std::array<Complex, 3> feet{f0, f1, f2};
        for (int k = 0; k < 3; ++k)
            placed.push_back(GeneralizedSphere::sphere({feet[k].real(), feet[k].imag(), rad(k)}, rad(k)));
        auto f3s = circle_intersections(f0, foot(0, 3), f1, foot(1, 3));
        if (f3s.empty())
            throw PreconditionError("bends do not describe a tangent configuration");
        GeneralizedSphere s3 = best_candidate(placed, f3s, [&](Complex f) {
            return GeneralizedSphere::sphere({f.real(), f.imag(), rad(3)}, rad(3));
        });
        for (int k = 0; k < 3; ++k)
            out[round[k]] = placed[k + 1];
        out[round[3]] = s3;
    } else if (flat.empty()) {
        std::array<int, 5> order{0, 1, 2, 3, 4};
        std::stable_partition(order.begin(), order.end(), [&](int i) { return bends[i] < 0; });
        // Pick slots 1 and 2 so the first three centers span a fat triangle.
        double best_h = -1.0;
        std::array<int, 5> best_order = order;
        for (int j = 1; j < 5; ++j) {
            for (int k = j + 1; k < 5; ++k) {
                double d01 = tangent_distance(bends[order[0]], bends[order[j]]);
                double d02 = tangent_distance(bends[order[0]], bends[order[k]]);
                double d12 = tangent_distance(bends[order[j]], bends[order[k]]);
                double x = (d02 * d02 - d12 * d12 + d01 * d01) / (2.0 * d01);
                double h = std::sqrt(std::max(0.0, d02 * d02 - x * x)) / std::max({d01, d02, d12});
                if (h > best_h + 1e-12) {
                    best_h = h;
                    std::array<int, 5> o{order[0], order[j], order[k], 0, 0};
                    int m = 3;
                    for (int t = 1; t < 5; ++t)
                        if (t != j && t != k)
                            o[m++] = order[t];
                    best_order = o;
                }
            }
        }
        order = best_order;
        std::array<double, 5> b{};
        for (int k = 0; k < 5; ++k)
            b[k] = bends[order[k]];
        Vec3 c0{}, c1{tangent_distance(b[0], b[1]), 0, 0};
        auto c2s = circle_intersections(0.0, tangent_distance(b[0], b[2]),
                                        Complex(c1.x, 0.0), tangent_distance(b[1], b[2]));
        if (c2s.empty())
            throw PreconditionError("bends do not describe a tangent configuration");
        Complex c2z = c2s[0].imag() >= 0 ? c2s[0] : c2s[1];
        Vec3 c2{c2z.real(), c2z.imag(), 0};
        std::array<Vec3, 3> base{c0, c1, c2};
        auto c3s = trilaterate(base, {tangent_distance(b[0], b[3]), tangent_distance(b[1], b[3]),
                                      tangent_distance(b[2], b[3])});
        if (c3s.empty())
            throw PreconditionError("bends do not describe a tangent configuration");
        Vec3 c3 = c3s[0].z >= 0 ? c3s[0] : c3s[1];
        std::vector<GeneralizedSphere> placed{round_sphere(c0, b[0]), round_sphere(c1, b[1]),
                                              round_sphere(c2, b[2]), round_sphere(c3, b[3])};
        auto c4s = trilaterate(base, {tangent_distance(b[0], b[4]), tangent_distance(b[1], b[4]),
                                      tangent_distance(b[2], b[4])});
        if (c4s.empty())
            throw PreconditionError("bends do not describe a tangent configuration");
        // The mirror of c3 is a valid candidate only if it is distinct from c3.
        GeneralizedSphere s4 = best_candidate(placed, c4s, [&](Vec3 c) {
            return round_sphere(c, b[4]);
        });
        for (int k = 0; k < 4; ++k)
            out[order[k]] = placed[k];
        out[order[4]] = s4;
    } else {
        throw PreconditionError("at most two bends may be zero");
    }

    std::vector<GeneralizedSphere> seed;
    for (auto& g : out)
        seed.push_back(*g);
    if (seed_defect(seed) > kSeedTangencyTol)
        throw PreconditionError("bends do not describe a tangent configuration");
    return seed;
}

std::vector<GeneralizedCircle> farey_strip_seed()
{
    return circle_seed({0.0, 0.0, 2.0, 2.0});
}

std::vector<GeneralizedSphere> soddy_base_seed()
{
    return sphere_seed({0.0, 0.0, 2.0, 2.0, 2.0});
}

//---------------------------------------------------------------------------//
// Packing
//---------------------------------------------------------------------------//

Packing::Packing(int dim, std::vector<Element> elements, std::vector<std::vector<int>> adjacency,
                 double min_radius, std::optional<Box> region, std::optional<int> family_anchor)
    : dim_(dim),
      elements_(std::move(elements)),
      adjacency_(std::move(adjacency)),
      min_radius_(min_radius),
      region_(region),
      family_anchor_(family_anchor)
{
    if (dim_ != 2 && dim_ != 3)
        throw PreconditionError("packing dimension must be 2 or 3");
    if (adjacency_.size() != elements_.size())
        throw PreconditionError("adjacency size does not match element count");
}

Element const& Packing::element(int id) const
{
    if (id < 0 || static_cast<std::size_t>(id) >= elements_.size())
        throw PreconditionError("invalid element id " + std::to_string(id));
    return elements_[id];
}

std::span<const int> Packing::neighbors(int id) const
{
    element(id);
    return adjacency_[id];
}

GeneralizedCircle Packing::circle(int id) const
{
    if (dim_ != 2)
        throw PreconditionError("circle view requested on a sphere packing");
    Element const& e = element(id);
    if (e.flat)
        return GeneralizedCircle::line(to_complex(e.center), to_complex(e.normal));
    return round_circle(to_complex(e.center), e.curvature);
}

GeneralizedSphere Packing::sphere(int id) const
{
    if (dim_ != 3)
        throw PreconditionError("sphere view requested on a circle packing");
    Element const& e = element(id);
    if (e.flat)
        return GeneralizedSphere::plane(e.center, e.normal);
    return round_sphere(e.center, e.curvature);
}

std::size_t Packing::seed_count() const
{
    std::size_t n = 0;
    while (n < elements_.size() && elements_[n].word.empty())
        ++n;
    return n;
}

CapExceeded::CapExceeded(std::size_t cap, Packing partial)
    : ResourceError("packing exceeds the element cap of " + std::to_string(cap)),
      partial_(std::move(partial))
{
}

Packing generate_packing(std::span<const GeneralizedCircle> seed, GenerationOptions const& opts)
{
    std::vector<SeedBall> balls;
    for (auto const& g : seed) {
        if (g.is_line())
            balls.push_back({true, 0.0, to_vec(g.base()), to_vec(g.normal())});
        else
            balls.push_back({false, g.curvature(), to_vec(g.center()), {}});
    }
    Packing p = Generator<4>(balls, opts).run();
    verify_tangency(p);
    return p;
}

Packing generate_packing(std::span<const GeneralizedSphere> seed, GenerationOptions const& opts)
{
    std::vector<SeedBall> balls;
    for (auto const& g : seed) {
        if (g.is_plane())
            balls.push_back({true, 0.0, g.base(), g.normal()});
        else
            balls.push_back({false, g.curvature(), g.center(), {}});
    }
    Packing p = Generator<5>(balls, opts).run();
    verify_tangency(p);
    return p;
}

std::vector<int> tangent_set(Packing const& p, int id)
{
    auto n = p.neighbors(id);
    return {n.begin(), n.end()};
}

double max_tangency_defect(Packing const& p)
{
    double worst = 0.0;
    for (int i = 0; i < static_cast<int>(p.size()); ++i) {
        for (int j : p.neighbors(i)) {
            if (j <= i)
                continue;
            double d, scale;
            if (p.dim() == 2) {
                auto a = p.circle(i), b = p.circle(j);
                d = tangency_defect(a, b);
                scale = std::max(a.radius(), b.radius());
            } else {
                auto a = p.sphere(i), b = p.sphere(j);
                d = tangency_defect(a, b);
                scale = std::max(a.radius(), b.radius());
            }
            worst = std::max(worst, scale > 0.0 ? d / scale : d);
        }
    }
    return worst;
}

}  // namespace apollo
