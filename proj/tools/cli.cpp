#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "mmk/case_studies.hpp"
#include "mmk/feasibility.hpp"
#include "mmk/transport.hpp"
#include "mmk/xor_model.hpp"

namespace mmk::cli {

namespace {

using nlohmann::json;

Rational rational_of(const json& x) {
    if (x.is_string()) return parse_rational(x.get<std::string>());
    if (x.is_number_integer()) return Rational(x.get<long>());
    if (x.is_number()) return parse_rational(x.dump());
    throw DomainError("expected a rational as string or number");
}

std::vector<Rational> weights_of(const json& j, std::size_t expected, const std::string& what) {
    const json& arr = j.is_object() ? j.at("weights") : j;
    if (!arr.is_array()) throw DomainError(what + ": expected an array of weights");
    if (arr.size() != expected)
        throw DomainError(what + ": expected " + std::to_string(expected) + " weights, got " + std::to_string(arr.size()));
    std::vector<Rational> w;
    w.reserve(expected);
    for (const auto& x : arr) w.push_back(rational_of(x));
    return w;
}

std::size_t cells_of(const std::vector<int>& sizes) {
    std::size_t c = 1;
    for (int s : sizes) c *= static_cast<std::size_t>(s);
    return c;
}

std::string slurp(const std::string& path) {
    std::ostringstream os;
    if (path == "-") {
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    os << in.rdbuf();
    return os.str();
}

ProblemFile load(const std::string& path) { return parse_problem(json::parse(slurp(path))); }

const CostGrid& need_cost(const ProblemFile& p) {
    if (!p.cost) throw DomainError("problem file has no cost");
    return *p.cost;
}

TransportOptions transport_opts(const RunConfig& cfg) {
    TransportOptions o;
    o.arithmetic = cfg.arithmetic;
    o.tolerance = cfg.tolerance;
    return o;
}

json verdict_json(const FeasibilityVerdict& v) {
    json j;
    j["feasible"] = v.feasible;
    if (v.feasible) {
        j["witness"] = to_json(v.witness);
    } else {
        j["certificate"] = to_json(v.certificate);
        j["certificate_value"] = to_string(v.certificate_value);
    }
    return j;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    if (!f) throw DomainError("cannot write " + p.string());
    f << text;
}

struct Emitter {
    const RunConfig& cfg;
    std::ostream& out;
    void operator()(const json& j) const {
        if (cfg.out.empty()) {
            out << j.dump(2) << '\n';
        } else {
            write_file(cfg.out, j.dump(2) + "\n");
        }
    }
};

lp::Arithmetic parse_arithmetic(const std::string& s) {
    if (s == "exact") return lp::Arithmetic::Exact;
    if (s == "float") return lp::Arithmetic::Float;
    throw DomainError("arithmetic must be exact or float, got " + s);
}

// ---- subcommands

int cmd_check(const std::string& path, const RunConfig& cfg, std::ostream& out) {
    auto p = load(path);
    auto cons = is_consistent(p.family);
    if (!cons.consistent) {
        json j{{"consistent", false}, {"feasible", false}};
        auto bad = json::array();
        for (const auto& [a, b] : cons.offending) bad.push_back({a.key(), b.key()});
        j["offending"] = bad;
        Emitter{cfg, out}(j);
        return Infeasible;
    }
    auto v = kellerer_check(p.family);
    json j = verdict_json(v);
    j["consistent"] = true;
    if (!v.feasible) j["certificate_verified"] = verify_kellerer_certificate(p.family, v.certificate);
    Emitter{cfg, out}(j);
    return v.feasible ? Ok : Infeasible;
}

int cmd_solve(const std::string& path, const RunConfig& cfg, std::ostream& out) {
    auto p = load(path);
    auto r = transport_solve(p.family, need_cost(p), transport_opts(cfg));
    Emitter{cfg, out}(to_json(r));
    return r.feasible ? Ok : Infeasible;
}

int cmd_dual(const std::string& path, const RunConfig& cfg, std::ostream& out) {
    auto p = load(path);
    auto r = transport_solve(p.family, need_cost(p), transport_opts(cfg));
    json j;
    if (!r.feasible) {
        j = to_json(r);
    } else if (r.exact) {
        j["value"] = to_string(r.dual_value);
        j["potentials"] = to_json(r.dual);
        j["violation"] = to_string(check_dual_feasible(r.dual, need_cost(p)));
    } else {
        j["value"] = r.dual_valuef;
        j["potentials"] = to_json(r.dualf);
    }
    Emitter{cfg, out}(j);
    return r.feasible ? Ok : Infeasible;
}

int cmd_signed(const std::string& path, const RunConfig& cfg, std::ostream& out) {
    auto p = load(path);
    if (!is_consistent(p.family).consistent) throw DomainError("signed uniting measure needs a consistent family");
    auto refs = p.refs ? *p.refs : one_marginals(p.family);
    auto s = signed_uniting(p.family, refs);
    bool exact = true;
    for (const auto& [alpha, m] : p.family.marginals)
        if (project(s, alpha) != m) exact = false;
    auto lam = json::array();
    for (const auto& l : signed_lambda(p.family.n, p.family.k)) lam.push_back(to_string(l));
    json j{{"lambda", lam}, {"measure", to_json(s)}, {"nonnegative", s.nonnegative()}, {"projections_exact", exact}};
    Emitter{cfg, out}(j);
    return Ok;
}

int cmd_bounded_dual(const std::string& path, const RunConfig& cfg, std::ostream& out) {
    auto p = load(path);
    const auto& c = need_cost(p);
    TransportOptions o;
    auto r = transport_solve(p.family, c, o);
    if (!r.feasible) {
        Emitter{cfg, out}(to_json(r));
        return Infeasible;
    }
    auto d = extract_bounded_dual(p.family, c, r.dual);
    const Rational norm = c.sup_norm();
    Rational fmin = 0, fmax = 0;
    bool first = true;
    for (const auto& [alpha, fa] : d.f)
        for (const auto& v : fa.weights()) {
            if (first || v < fmin) fmin = v;
            if (first || v > fmax) fmax = v;
            first = false;
        }
    auto F = d.total();
    Rational Fmin = F.empty() ? Rational(0) : *std::min_element(F.begin(), F.end());
    json j{{"value", to_string(integrate(d, p.family))},
           {"lp_value", to_string(r.primal_value)},
           {"norm", to_string(norm)},
           {"potentials", to_json(d)},
           {"f_min", to_string(fmin)},
           {"f_max", to_string(fmax)},
           {"F_min", to_string(Fmin)}};
    Emitter{cfg, out}(j);
    return Ok;
}

std::vector<std::filesystem::path> write_images(const CaseOutput& o, const std::string& dir) {
    std::vector<std::filesystem::path> paths;
    for (const auto& [stem, pgm] : o.images) {
        auto path = std::filesystem::path(dir.empty() ? "." : dir) / (stem + ".pgm");
        write_file(path, pgm);
        paths.push_back(path);
    }
    return paths;
}

int cmd_case(const std::vector<std::string>& names, int N, int jobs, bool images, const RunConfig& cfg, std::ostream& out) {
    for (const auto& n : names)
        if (std::find(case_names().begin(), case_names().end(), n) == case_names().end()) throw DomainError("unknown case: " + n);
    CaseParams params;
    params.N = N;
    params.arithmetic = cfg.arithmetic;
    params.seed = cfg.seed;
    std::vector<CaseOutput> results(names.size());
    std::vector<std::string> errors(names.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < names.size();) {
            try {
                results[i] = run_case(names[i], params);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int t = std::max(1, std::min<int>(jobs, static_cast<int>(names.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < t; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (!e.empty()) throw DomainError(e);
    auto all = json::array();
    for (auto& r : results) {
        if (images) {
            auto files = json::array();
            for (const auto& p : write_images(r, cfg.out_dir)) files.push_back(p.string());
            r.report["images"] = files;
        }
        all.push_back(r.report);
    }
    Emitter{cfg, out}(all.size() == 1 ? all[0] : all);
    return Ok;
}

int cmd_figure(const std::string& name, int depth, const std::vector<std::string>& zs, int N, const RunConfig& cfg, std::ostream& out) {
    json j{{"figure", name}};
    auto files = json::array();
    const std::filesystem::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
    if (name == "sierpinski") {
        std::vector<std::string> levels = zs;
        if (levels.empty())
            for (int q = 0; q < 4; ++q) levels.push_back(to_string(frac(q, 4)));
        int idx = 0;
        for (const auto& z : levels) {
            auto path = dir / ("sierpinski_d" + std::to_string(depth) + "_" + std::to_string(idx++) + ".pgm");
            write_file(path, sierpinski_slice_pgm(depth, Dyadic::parse(z)));
            files.push_back({{"z", z}, {"file", path.string()}});
        }
    } else if (name == "uniformband") {
        auto rep = run_uniformband(N ? N : 24, cfg.arithmetic);
        for (int z = 0; z < 3; ++z) {
            auto path = dir / ("uniformband_z" + std::to_string(z) + ".pgm");
            write_file(path, rep.slices[static_cast<std::size_t>(z)]);
            files.push_back({{"z", z}, {"file", path.string()}});
        }
        j["bang_bang_fraction"] = rep.bang_bang_fraction;
        j["max_line_error"] = rep.max_line_error;
    } else {
        throw DomainError("unknown figure: " + name + " (sierpinski, uniformband)");
    }
    j["files"] = files;
    Emitter{cfg, out}(j);
    return Ok;
}

ProblemFile export_problem(const std::string& name, int n, int k, const std::string& ratio, const std::vector<int>& axes) {
    ProblemFile p;
    if (name == "modk") {
        p.family = make_modk_counterexample(n, k);
    } else if (name == "two-point") {
        p.family = make_two_point_counterexample(parse_rational(ratio));
    } else if (name == "xor") {
        auto x = xor_instance(n);
        p.family = x.family;
        p.cost = x.cost;
    } else if (name == "nonuniform222") {
        p.family = build_nonuniform_2x2x2();
    } else if (name == "product") {
        if (axes.empty()) throw DomainError("product export needs --axes");
        std::vector<int> labels;
        for (std::size_t i = 0; i < axes.size(); ++i) labels.push_back(static_cast<int>(i) + 1);
        p.family = marginals_of(DiscreteMeasure::uniform(IndexSet(labels), axes), k);
    } else {
        throw DomainError("unknown problem: " + name + " (modk, two-point, xor, nonuniform222, product)");
    }
    return p;
}

}  // namespace

ProblemFile parse_problem(const json& j) {
    if (!j.is_object()) throw DomainError("problem file must be a JSON object");
    ProblemFile p;
    auto& fam = p.family;
    fam.n = j.at("n").get<int>();
    fam.k = j.at("k").get<int>();
    if (fam.n < 1 || fam.k < 1 || fam.k > fam.n) throw DomainError("need 1 <= k <= n");
    fam.sizes = j.at("axes").get<std::vector<int>>();
    if (static_cast<int>(fam.sizes.size()) != fam.n) throw DomainError("axes must list n sizes");
    for (int s : fam.sizes)
        if (s < 1) throw DomainError("axis sizes must be positive");
    const auto& ms = j.at("marginals");
    if (!ms.is_object()) throw DomainError("marginals must be an object keyed \"i,j,...\"");
    auto expected = subsets(fam.n, fam.k);
    if (ms.size() != expected.size()) throw DomainError("marginal keys must enumerate every k-subset exactly once");
    ProductGrid g(fam.sizes);
    for (const auto& alpha : expected) {
        if (!ms.contains(alpha.key())) throw DomainError("missing marginal " + alpha.key());
        auto sz = g.restrict_sizes(alpha);
        fam.marginals.emplace(alpha, DiscreteMeasure(alpha, sz, weights_of(ms.at(alpha.key()), cells_of(sz), "marginal " + alpha.key())));
    }
    fam.validate();
    if (j.contains("cost")) p.cost = CostGrid(fam.sizes, weights_of(j.at("cost"), cells_of(fam.sizes), "cost"));
    if (j.contains("refs")) {
        const auto& r = j.at("refs");
        if (!r.is_array() || static_cast<int>(r.size()) != fam.n) throw DomainError("refs must hold one measure per axis");
        std::vector<DiscreteMeasure> refs;
        for (int i = 0; i < fam.n; ++i) {
            auto w = weights_of(r[static_cast<std::size_t>(i)], static_cast<std::size_t>(fam.sizes[static_cast<std::size_t>(i)]),
                                "ref " + std::to_string(i + 1));
            refs.emplace_back(IndexSet{i + 1}, std::vector<int>{fam.sizes[static_cast<std::size_t>(i)]}, std::move(w));
        }
        p.refs = std::move(refs);
    }
    return p;
}

json to_json(const ProblemFile& p) {
    json j{{"n", p.family.n}, {"k", p.family.k}, {"axes", p.family.sizes}};
    json ms = json::object();
    for (const auto& [alpha, m] : p.family.marginals) ms[alpha.key()] = to_json(m)["weights"];
    j["marginals"] = ms;
    if (p.cost) {
        auto c = json::array();
        for (const auto& v : p.cost->values) c.push_back(to_string(v));
        j["cost"] = c;
    }
    if (p.refs) {
        auto r = json::array();
        for (const auto& m : *p.refs) r.push_back(to_json(m)["weights"]);
        j["refs"] = r;
    }
    return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete multistochastic Monge-Kantorovich toolkit", "mmk"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string arith;
    app.add_option("--arithmetic", arith, "exact or float (default: $MMK_ARITHMETIC, else exact)");
    app.add_option("--tolerance", cfg.tolerance, "float-mode pivot tolerance");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--out", cfg.out, "write the report here instead of stdout");
    app.add_option("--out-dir", cfg.out_dir, "directory for images");
    app.fallthrough();

    std::string file;
    auto add_file_cmd = [&](const std::string& name, const std::string& help) {
        auto* c = app.add_subcommand(name, help);
        c->add_option("file", file, "problem file, - for stdin")->required();
        return c;
    };
    auto* check = add_file_cmd("check", "consistency and Kellerer feasibility");
    auto* solve = add_file_cmd("solve", "primal, dual and gap");
    auto* dual = add_file_cmd("dual", "optimal potentials");
    auto* sgn = add_file_cmd("signed", "signed uniting measure");
    auto* bdual = add_file_cmd("bounded-dual", "bounded optimal potentials for (3,2) product-type families");

    auto* xr = app.add_subcommand("xor", "dyadic xor model");
    xr->require_subcommand(1);
    std::vector<std::string> xs;
    int depth = 5;
    std::string zarg = "0";
    auto* xf = xr->add_subcommand("f", "dual function f(x, y)");
    xf->add_option("xy", xs, "dyadic rationals")->expected(2)->required();
    auto* xi = xr->add_subcommand("integral", "integral of xor over [0,x] x [0,y]");
    xi->add_option("xy", xs, "dyadic rationals")->expected(2)->required();
    auto* xF = xr->add_subcommand("F", "F(x, y, z) = f(x,y) + f(x,z) + f(y,z) reference");
    xF->add_option("xyz", xs, "dyadic rationals")->expected(3)->required();
    auto* xx = xr->add_subcommand("xor", "digitwise xor of x and y");
    xx->add_option("xy", xs, "dyadic rationals")->expected(2)->required();
    auto* xm = xr->add_subcommand("member", "membership in the Sierpinski set to a given depth");
    xm->add_option("xyz", xs, "dyadic rationals")->expected(3)->required();
    xm->add_option("--depth", depth);
    auto* xsl = xr->add_subcommand("slice", "P2 image of the slice at height z");
    xsl->add_option("--depth", depth);
    xsl->add_option("--z", zarg);

    auto* cs = app.add_subcommand("case", "case-study reports");
    std::vector<std::string> names;
    int N = 0, jobs = 1;
    bool no_images = false;
    cs->add_option("names", names, "one or more of: unreachable nonstrong discontinuous uniformband plane-duals nonuniform222")->required();
    cs->add_option("--N", N, "grid size (0 picks the per-case default)");
    cs->add_option("--jobs", jobs, "worker threads for several cases");
    cs->add_flag("--no-images", no_images, "skip writing P2 slices");

    auto* fg = app.add_subcommand("figure", "write figure images");
    std::string fig;
    std::vector<std::string> zs;
    fg->add_option("name", fig, "sierpinski or uniformband")->required();
    fg->add_option("--depth", depth);
    fg->add_option("--z", zs, "slice heights (sierpinski)");
    fg->add_option("--N", N, "grid size (uniformband)");

    auto* ex = app.add_subcommand("export", "print a problem file for a built-in family");
    std::string problem, ratio = "5/2";
    int en = 3, ek = 2;
    std::vector<int> axes;
    ex->add_option("problem", problem, "modk, two-point, xor, nonuniform222 or product")->required();
    ex->add_option("--n", en);
    ex->add_option("--k", ek);
    ex->add_option("--ratio", ratio);
    ex->add_option("--axes", axes)->delimiter(',');

    std::vector<const char*> argv{"mmk"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return Ok;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return Ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return Malformed;
    }

    try {
        if (!arith.empty()) {
            cfg.arithmetic = parse_arithmetic(arith);
        } else if (const char* env = std::getenv("MMK_ARITHMETIC"); env && *env) {
            cfg.arithmetic = parse_arithmetic(env);
        }
        if (cfg.arithmetic == lp::Arithmetic::Float && !(cfg.tolerance > 0)) throw DomainError("tolerance must be positive");

        if (*check) return cmd_check(file, cfg, out);
        if (*solve) return cmd_solve(file, cfg, out);
        if (*dual) return cmd_dual(file, cfg, out);
        if (*sgn) return cmd_signed(file, cfg, out);
        if (*bdual) return cmd_bounded_dual(file, cfg, out);
        if (*xr) {
            std::vector<Dyadic> d;
            for (const auto& s : xs) d.push_back(Dyadic::parse(s));
            if (*xf) out << to_string(dual_f(d[0], d[1])) << '\n';
            if (*xi) out << to_string(xor_integral(d[0], d[1])) << '\n';
            if (*xF) out << to_string(F_xor(d[0], d[1], d[2])) << '\n';
            if (*xx) out << to_string(xor_dyadic(d[0], d[1]).value()) << '\n';
            if (*xm) out << (sierpinski_member(d[0], d[1], d[2], depth) ? "true" : "false") << '\n';
            if (*xsl) {
                auto img = sierpinski_slice_pgm(depth, Dyadic::parse(zarg));
                if (cfg.out.empty()) out << img;
                else write_file(cfg.out, img);
            }
            return Ok;
        }
        if (*cs) return cmd_case(names, N, jobs, !no_images, cfg, out);
        if (*fg) return cmd_figure(fig, depth, zs, N, cfg, out);
        if (*ex) {
            Emitter{cfg, out}(to_json(export_problem(problem, en, ek, ratio, axes)));
            return Ok;
        }
    } catch (const json::exception& e) {
        err << "mmk: malformed JSON: " << e.what() << '\n';
        return Malformed;
    } catch (const std::exception& e) {
        err << "mmk: " << e.what() << '\n';
        return Malformed;
    }
    return Malformed;
}

}  // namespace mmk::cli
