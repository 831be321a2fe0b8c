#include "apollo/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "apollo/apkg.hpp"
#include "apollo/constants.hpp"
#include "apollo/density.hpp"
#include "apollo/descartes.hpp"
#include "apollo/error.hpp"
#include "apollo/farey.hpp"
#include "apollo/plot.hpp"
#include "apollo/summation.hpp"

namespace apollo {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

std::string fmt(double x, int digits = 17)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

struct EpsSpec {
    std::vector<double> list;
    std::vector<double> range;
    std::vector<double> linear;

    void attach(CLI::App* cmd)
    {
        auto* a = cmd->add_option("--eps", list, "Explicit eps values")->delimiter(',');
        auto* b = cmd->add_option("--eps-range", range, "Geometric grid lo,hi,count")->delimiter(',');
        auto* c = cmd->add_option("--eps-linear", linear, "Linear grid lo,hi,count")->delimiter(',');
        a->excludes(b)->excludes(c);
        b->excludes(c);
    }

    bool geometric() const { return !range.empty(); }

    std::vector<double> grid() const
    {
        if (!list.empty())
            return list;
        auto const& r = !range.empty() ? range : linear;
        if (r.empty())
            throw UsageError("one of --eps, --eps-range, --eps-linear is required");
        if (r.size() != 3 || r[2] < 1 || r[2] != std::floor(r[2]))
            throw UsageError("eps grid needs lo,hi,count with an integer count >= 1");
        double lo = r[0], hi = r[1];
        auto n = static_cast<std::size_t>(r[2]);
        if (geometric() && !(lo > 0.0 && hi > 0.0))
            throw UsageError("geometric eps grid needs positive bounds");
        std::vector<double> g(n);
        for (std::size_t k = 0; k < n; ++k) {
            double t = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
            g[k] = geometric() ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
        }
        return g;
    }
};

struct Output {
    std::string format = "csv";
    std::string path;
    bool log_x = false;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--format", format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
        cmd->add_option("-o,--output", path, "Output file (default: standard output)");
        cmd->add_flag("--log-x", log_x, "Logarithmic eps axis in SVG output");
    }

    void write(std::ostream& out, std::string const& text) const
    {
        if (path.empty()) {
            out << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f || !(f << text))
            throw Error("cannot write " + path);
    }
};

std::string csv(std::vector<std::string> const& header, std::vector<std::vector<std::string>> const& rows)
{
    std::string s;
    auto line = [&](std::vector<std::string> const& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                s += ',';
            s += cells[i];
        }
        s += '\n';
    };
    line(header);
    for (auto const& r : rows)
        line(r);
    return s;
}

void apply_threads(std::optional<unsigned> flag)
{
    unsigned n = 0;
    if (flag) {
        n = *flag;
    } else if (char const* env = std::getenv("APOLLON_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw UsageError("APOLLON_THREADS must be a positive integer");
        n = static_cast<unsigned>(v);
    }
    set_thread_cap(n);
}

//---------------------------------------------------------------------------//
// generate
//---------------------------------------------------------------------------//

struct GenerateArgs {
    int dim = 2;
    std::vector<double> curvatures;
    double min_radius = 0.0;
    std::string output;
    std::size_t max_elements = 100'000'000;
    std::vector<double> region;
    std::optional<int> family;
};

int cmd_generate(GenerateArgs const& a, std::ostream& out)
{
    std::size_t want = static_cast<std::size_t>(a.dim) + 2;
    std::vector<double> b = a.curvatures;
    if (b.size() + 1 == want) {
        // complete the tuple; the smaller root is the enclosing solution
        double big, small;
        if (a.dim == 2)
            std::tie(big, small) = fourth_curvature(b[0], b[1], b[2]);
        else
            std::tie(big, small) = fifth_curvature(b[0], b[1], b[2], b[3]);
        out << "completions: " << fmt(big, 15) << " and " << fmt(small, 15) << "; using " << fmt(small, 15) << "\n";
        b.insert(b.begin(), small);
    }
    if (b.size() != want)
        throw UsageError("--curvatures needs " + std::to_string(want - 1) + " or " + std::to_string(want)
                         + " values in dimension " + std::to_string(a.dim));

    GenerationOptions o;
    o.min_radius = a.min_radius;
    o.max_elements = a.max_elements;
    o.family_of = a.family;
    if (!a.region.empty()) {
        if (a.region.size() != 2 * static_cast<std::size_t>(a.dim))
            throw UsageError("--region needs " + std::to_string(2 * a.dim) + " values (lows then highs)");
        Box box;
        for (int d = 0; d < a.dim; ++d) {
            box.lo[d] = a.region[d];
            box.hi[d] = a.region[a.dim + d];
        }
        o.region = box;
    } else if (std::count(b.begin(), b.end(), 0.0) == 2) {
        // Two flats: periodic, so default to one period cell plus a margin.
        // The seed puts the flats at height 0 and h = 2 / b with spheres on a
        // lattice of spacing h.
        double bend = *std::max_element(b.begin(), b.end());
        double h = 2.0 / bend, m = 0.1 * h;
        Box box;
        box.lo = {-m, -m, -m};
        box.hi = {h + m, (a.dim == 2 ? h : std::sqrt(3.0) * h) + m, h + m};
        o.region = box;
        out << "periodic seed: region defaults to one period cell\n";
    }

    out << "seed:";
    for (double x : b)
        out << ' ' << fmt(x, 15);
    out << "\n";

    auto report = [&](Packing const& p) {
        save_packing(p, std::filesystem::path(a.output));
        out << "elements: " << p.size() << "\n";
        std::map<int, std::size_t> hist;
        for (auto const& e : p.elements())
            ++hist[e.depth];
        out << "depth histogram:\n";
        for (auto [d, n] : hist)
            out << "  " << d << " " << n << "\n";
    };

    try {
        Packing p = a.dim == 2
            ? generate_packing(circle_seed({b[0], b[1], b[2], b[3]}), o)
            : generate_packing(sphere_seed({b[0], b[1], b[2], b[3], b[4]}), o);
        report(p);
    } catch (CapExceeded const& e) {
        out << "partial packing (cap reached)\n";
        report(e.partial());
        throw;
    }
    return kExitOk;
}

//---------------------------------------------------------------------------//
// ford-density
//---------------------------------------------------------------------------//

struct FordArgs {
    EpsSpec eps;
    std::vector<double> interval;
    Output output;
};

int cmd_ford_density(FordArgs const& a, std::ostream& out)
{
    auto grid = a.eps.grid();
    std::optional<Interval> I;
    if (!a.interval.empty()) {
        if (a.interval.size() != 2)
            throw UsageError("--interval needs a,b");
        I = Interval{a.interval[0], a.interval[1]};
    }
    const double limit = 3.0 / std::numbers::pi;
    std::vector<double> ys;
    std::vector<std::vector<std::string>> rows;
    for (double e : grid) {
        double d = I ? L_interval(*I, e) : ford_L(e);
        ys.push_back(d);
        rows.push_back({fmt(e), fmt(d), fmt(d - limit)});
    }
    if (a.output.format == "svg") {
        PlotSpec spec;
        spec.title = I ? "Ford density on [" + fmt(I->a, 6) + ", " + fmt(I->b, 6) + "]" : "Ford density L(eps)";
        spec.log_x = a.output.log_x || a.eps.geometric();
        spec.reference = limit;
        spec.reference_label = "3/pi";
        a.output.write(out, svg_plot(grid, ys, spec));
    } else {
        a.output.write(out, csv({"epsilon", "density", "deviation"}, rows));
    }
    return kExitOk;
}

//---------------------------------------------------------------------------//
// density
//---------------------------------------------------------------------------//

struct DensityArgs {
    std::string input;
    std::optional<int> circle;
    bool outer = false;
    std::string mode = "concentric";
    std::optional<int> neighbor;
    std::vector<double> window;
    EpsSpec eps;
    Output output;
};

int cmd_density(DensityArgs const& a, std::ostream& out)
{
    auto grid = a.eps.grid();
    Packing p = load_packing(std::filesystem::path(a.input));

    DensityQuery q;
    q.packing = &p;
    if (a.outer) {
        auto const& els = p.elements();
        auto it = std::find_if(els.begin(), els.end(), [](Element const& e) { return e.curvature < 0.0; });
        if (it == els.end())
            throw PreconditionError("packing has no outer element");
        q.base = static_cast<int>(it - els.begin());
    } else if (a.circle) {
        q.base = *a.circle;
    } else {
        throw UsageError("choose a base with --circle <id> or --outer");
    }
    if (q.base < 0 || q.base >= static_cast<int>(p.size()))
        throw PreconditionError("invalid base element id " + std::to_string(q.base));

    if (a.mode == "tangent") {
        q.mode = DensityMode::tangent_family;
        q.neighbor = a.neighbor;
        if (!q.neighbor) {
            auto nb = p.neighbors(q.base);
            if (nb.empty())
                throw PreconditionError("base element has no tangent neighbour");
            q.neighbor = nb.front();
        }
    }
    if (!a.window.empty()) {
        std::size_t n = static_cast<std::size_t>(p.dim()) - 1;
        if (a.window.size() != 2 * n)
            throw UsageError("--window needs " + std::to_string(2 * n) + " values (lows then highs)");
        Window w;
        for (std::size_t d = 0; d < n; ++d) {
            w.lo[d] = a.window[d];
            w.hi[d] = a.window[n + d];
        }
        q.window = w;
    }

    auto prof = density_profile(q, grid);
    std::vector<double> ys;
    std::vector<std::vector<std::string>> rows;
    for (auto const& r : prof.rows) {
        ys.push_back(r.density);
        rows.push_back({fmt(r.eps), fmt(r.density), std::to_string(r.terms), fmt(r.cutoff)});
    }
    if (a.output.format == "svg") {
        PlotSpec spec;
        spec.title = std::string(p.dim() == 2 ? "Radial density" : "Spherical radial density") + " around element "
            + std::to_string(q.base);
        spec.log_x = a.output.log_x || a.eps.geometric();
        spec.reference = p.dim() == 2 ? cusp_densities().two_d : cusp_densities().three_d;
        spec.reference_label = p.dim() == 2 ? "3/pi" : "sqrt(3)/(2 V_T)";
        a.output.write(out, svg_plot(grid, ys, spec));
    } else {
        a.output.write(out, csv({"epsilon", "density", "terms", "cutoff"}, rows));
    }
    return kExitOk;
}

int cmd_constants(std::ostream& out)
{
    auto const& c = cusp_densities();
    out << "two_d " << fmt(c.two_d, 15) << "\n";
    out << "lobachevsky_pi_over_3 " << fmt(c.lobachevsky_pi_over_3, 15) << "\n";
    out << "v_t " << fmt(c.v_t, 15) << "\n";
    out << "three_d " << fmt(c.three_d, 15) << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Apollonian packings, Ford circles and radial densities", "apollon"};
    app.require_subcommand(1);
    std::optional<unsigned> threads;
    app.add_option("--threads", threads, "Worker cap (overrides APOLLON_THREADS)")->check(CLI::PositiveNumber);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Generate a packing and write it as APKG");
    g->add_option("--dim", gen.dim, "2 or 3")->check(CLI::IsMember({2, 3}));
    g->add_option("--curvatures", gen.curvatures, "Seed curvatures, comma separated")->required()->delimiter(',');
    g->add_option("--min-radius", gen.min_radius, "Radius cutoff")->required()->check(CLI::PositiveNumber);
    g->add_option("-o,--output", gen.output, "APKG file")->required();
    g->add_option("--max-elements", gen.max_elements, "Element cap");
    g->add_option("--region", gen.region, "Keep elements meeting this box (lows then highs)")->delimiter(',');
    g->add_option("--family", gen.family, "Only elements tangent to this seed slot");

    FordArgs ford;
    auto* f = app.add_subcommand("ford-density", "Sweep L(eps) or L_I(eps) of the Ford circles");
    ford.eps.attach(f);
    f->add_option("--interval", ford.interval, "Subinterval a,b of [0,1]")->delimiter(',');
    ford.output.attach(f);

    DensityArgs dens;
    auto* d = app.add_subcommand("density", "Radial density profile of a packing file");
    d->add_option("--input", dens.input, "APKG file")->required();
    auto* circ = d->add_option("--circle", dens.circle, "Base element id");
    auto* outer = d->add_flag("--outer", dens.outer, "Use the enclosing element as base");
    circ->excludes(outer);
    d->add_option("--mode", dens.mode, "concentric or tangent")->check(CLI::IsMember({"concentric", "tangent"}));
    d->add_option("--neighbor", dens.neighbor, "Tangent family: neighbour fixing w0 (default: first)");
    d->add_option("--window", dens.window, "Window on a flat base (lows then highs)")->delimiter(',');
    dens.eps.attach(d);
    dens.output.attach(d);

    auto* k = app.add_subcommand("constants", "Print the limiting densities");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (CLI::ParseError const& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        apply_threads(threads);
        if (g->parsed())
            return cmd_generate(gen, out);
        if (f->parsed())
            return cmd_ford_density(ford, out);
        if (d->parsed())
            return cmd_density(dens, out);
        if (k->parsed())
            return cmd_constants(out);
    } catch (UsageError const& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (ResourceError const& e) {
        err << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (PreconditionError const& e) {
        err << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (ParseError const& e) {
        err << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (VersionError const& e) {
        err << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace apollo
