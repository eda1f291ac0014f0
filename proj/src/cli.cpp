#include "eqstates/cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include "eqstates/csv.hpp"
#include "eqstates/decomposition.hpp"
#include "eqstates/natural_extension.hpp"
#include "eqstates/pressure.hpp"
#include "eqstates/solenoid.hpp"
#include "eqstates/specification.hpp"
#include "eqstates/transfer_oracle.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

namespace eqs {

using nlohmann::json;

const std::vector<std::string> subcommands{"pressure", "decompose", "glue",       "transfer",
                                           "extension", "solenoid", "gap-report", "check"};

namespace {

const char* describe(const std::string& sub)
{
    if (sub == "pressure") return "separated-set pressure estimates at each eps";
    if (sub == "decompose") return "G/S split statistics of random orbit segments";
    if (sub == "glue") return "glue random good segments into one shadowing orbit";
    if (sub == "transfer") return "leading eigendata of the discretised transfer operator";
    if (sub == "extension") return "Bowen property of lifted potentials on the natural extension";
    if (sub == "solenoid") return "solenoid attractor diagnostics and point cloud";
    if (sub == "gap-report") return "pressure gap between all orbits and S_sigma";
    return "run all hypothesis checks";
}

} // namespace

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    return out;
}

double to_number(const std::string& field, const std::string& text)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ValidationError(field, "expected a number, got '" + text + "'");
    }
    return v;
}

std::vector<double> number_list(const std::string& field, const std::string& text)
{
    std::vector<double> out;
    for (const auto& part : split(text, ';')) {
        out.push_back(to_number(field, part));
    }
    return out;
}

std::string json_text(const json& j) { return j.dump(); }

std::vector<double> as_list(const std::string& field, const json& j)
{
    if (j.is_number()) {
        return {j.get<double>()};
    }
    if (j.is_array()) {
        std::vector<double> out;
        for (const auto& v : j) {
            if (!v.is_number()) {
                throw ValidationError(field, "expected a list of numbers");
            }
            out.push_back(v.get<double>());
        }
        return out;
    }
    throw ValidationError(field, "expected a number or a list of numbers");
}

template <class T>
T get_as(const std::string& field, const json& j)
{
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ValidationError(field, "wrong type " + std::string(j.type_name()));
    }
}

// ---------------------------------------------------------------- sampling

OrbitSegment sample_good(const MapSystem& map, const DecompositionConfig& dec, std::mt19937_64& rng, int n_min,
                         int n_max)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double x = unit(rng);
        const int n = n_min + static_cast<int>(rng() % static_cast<std::uint64_t>(n_max - n_min + 1));
        if (classify_segment(map, dec, {x, n}) == SegmentClass::good) {
            return {x, n};
        }
    }
    throw NumericalError("could not sample a segment in G_sigma; try a smaller sigma or shorter lengths");
}

std::string flag(bool b) { return b ? "true" : "false"; }

void header(std::ostream& out, const std::string& sub, const ExperimentConfig& cfg)
{
    out << csv_header_comment(sub, cfg.hash(), cfg.seed) << '\n';
}

PressureOptions pressure_options(const ExperimentConfig& cfg)
{
    PressureOptions opts;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    opts.workers = WorkerPool::from_env(cfg.workers == 0 ? hw : cfg.workers);
    return opts;
}

// ---------------------------------------------------------------- subcommands

int cmd_pressure(const ExperimentConfig& cfg, std::ostream& out)
{
    const auto map = parse_map(cfg.map);
    const auto phi = parse_potential(cfg.potential, map);
    const auto opts = pressure_options(cfg);
    header(out, "pressure", cfg);
    out << "collection,sigma,eps,n,log_partition_sum,set_size,rate,rate_uncertainty,limsup_proxy\n";
    auto emit = [&](const std::string& name, double sigma, const PressureEstimate& est) {
        for (std::size_t i = 0; i < est.n_values.size(); ++i) {
            out << csv_join({name, csv_number(sigma), csv_number(est.eps), std::to_string(est.n_values[i]),
                             csv_number(est.log_partition_sums[i]), std::to_string(est.set_sizes[i]),
                             csv_number(est.rate), csv_number(est.rate_uncertainty), csv_number(est.limsup_proxy)})
                << '\n';
        }
    };
    for (double eps : cfg.eps) {
        if (cfg.collection == "full") {
            emit("full", std::nan(""), pressure_at_scale(map, phi, SegmentCollection::full(), eps, cfg.n_max, opts));
            continue;
        }
        for (double s : cfg.sigma) {
            const DecompositionConfig dec(s);
            const auto coll = cfg.collection == "good" ? good_collection(map, dec) : bad_collection(map, dec);
            emit(coll.name, s, pressure_at_scale(map, phi, coll, eps, cfg.n_max, opts));
        }
    }
    return 0;
}

int cmd_decompose(const ExperimentConfig& cfg, std::ostream& out)
{
    const auto map = parse_map(cfg.map);
    header(out, "decompose", cfg);
    out << "sigma,segments,in_G,in_S,neither,mean_p,mean_g,mean_s\n";
    for (double s : cfg.sigma) {
        const DecompositionConfig dec(s);
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        long counts[3] = {0, 0, 0};
        double sums[3] = {0.0, 0.0, 0.0};
        for (int i = 0; i < cfg.samples; ++i) {
            const double x = unit(rng);
            const int n = cfg.length_min +
                          static_cast<int>(rng() % static_cast<std::uint64_t>(cfg.length_max - cfg.length_min + 1));
            const OrbitSegment seg{x, n};
            ++counts[static_cast<int>(classify_segment(map, dec, seg))];
            const auto d = decompose(map, dec, seg);
            sums[0] += d.p_len;
            sums[1] += d.g_len;
            sums[2] += d.s_len;
        }
        const double m = cfg.samples;
        out << csv_join({csv_number(s), std::to_string(cfg.samples), std::to_string(counts[0]),
                         std::to_string(counts[1]), std::to_string(counts[2]), csv_number(sums[0] / m),
                         csv_number(sums[1] / m), csv_number(sums[2] / m)})
            << '\n';
    }
    return 0;
}

int cmd_glue(const ExperimentConfig& cfg, std::ostream& out)
{
    const auto map = parse_map(cfg.map);
    const DecompositionConfig dec(cfg.sigma.front());
    GlueOptions opts;
    opts.tau_cap = cfg.tau_cap;
    json plans = json::array();
    std::vector<std::string> rows;
    for (double eps : cfg.eps) {
        std::mt19937_64 rng(cfg.seed);
        for (int p = 0; p < cfg.samples; ++p) {
            std::vector<OrbitSegment> segs;
            for (int j = 0; j < cfg.segments; ++j) {
                segs.push_back(sample_good(map, dec, rng, cfg.length_min, cfg.length_max));
            }
            const auto plan = glue_base(map, dec, segs, eps, opts);
            const double err = verify_shadow(map, plan);
            std::string trans;
            int worst = 0;
            for (std::size_t i = 0; i < plan.transitions.size(); ++i) {
                trans += (i ? ";" : "") + std::to_string(plan.transitions[i]);
                worst = std::max(worst, plan.transitions[i]);
            }
            const bool ok = err <= eps && worst <= plan.tau_cap;
            if (cfg.format == "json") {
                plans.push_back(json::parse(plan_to_json(plan, err)));
            } else {
                rows.push_back(csv_join({csv_number(eps), std::to_string(p), std::to_string(plan.tau_cap), trans,
                                         std::to_string(worst), csv_number(err), flag(ok)}));
            }
        }
    }
    if (cfg.format == "json") {
        json doc{{"config_hash", hex64(cfg.hash())}, {"seed", cfg.seed}, {"plans", plans}};
        out << doc.dump(2) << '\n';
        return 0;
    }
    header(out, "glue", cfg);
    out << "eps,plan,tau_cap,transitions,max_transition,shadow_error,ok\n";
    for (const auto& r : rows) {
        out << r << '\n';
    }
    return 0;
}

int cmd_transfer(const ExperimentConfig& cfg, std::ostream& out)
{
    const auto map = parse_map(cfg.map);
    const auto phi = parse_potential(cfg.potential, map);
    const auto eig = leading_eigen(build_operator(map, phi, cfg.grid_size));
    header(out, "transfer", cfg);
    out << "# lambda=" << csv_number(eig.lambda) << " log_lambda=" << csv_number(eig.log_lambda)
        << " iterations=" << eig.iterations << " residual=" << csv_number(eig.residual) << '\n';
    out << "node,h,nu,density\n";
    for (std::size_t i = 0; i < eig.nodes.size(); ++i) {
        out << csv_join({csv_number(eig.nodes[i]), csv_number(eig.eigenfunction[i]), csv_number(eig.eigenmeasure[i]),
                         csv_number(eig.equilibrium_density[i])})
            << '\n';
    }
    return 0;
}

int cmd_extension(const ExperimentConfig& cfg, std::ostream& out)
{
    const auto map = parse_map(cfg.map);
    const auto psi = parse_potential(cfg.potential, map);
    header(out, "extension", cfg);
    out << "sigma,a,alpha,eps,bound,empirical_max\n";
    BowenSampling sampling;
    sampling.n_min = cfg.length_min;
    sampling.n_max = cfg.length_max;
    sampling.seed = cfg.seed;
    for (double s : cfg.sigma) {
        const DecompositionConfig dec(s);
        for (double a : cfg.a) {
            const ExtensionConfig ecfg(a, cfg.K);
            const auto lifted =
                cfg.lift == "projection" ? LiftedPotential::projection(psi) : LiftedPotential::fiber_averaged(psi, a);
            for (double eps : cfg.eps) {
                const auto check = verify_bowen(map, ecfg, dec, lifted, eps, cfg.samples, sampling);
                out << csv_join({csv_number(s), csv_number(a), csv_number(lifted.holder_exponent()), csv_number(eps),
                                 csv_number(check.bound + check.slack), csv_number(check.empirical_max)})
                    << '\n';
            }
        }
    }
    return 0;
}

int cmd_solenoid(const ExperimentConfig& cfg, std::ostream& out)
{
    const SolenoidSystem sys(cfg.lambda_s, cfg.r);
    const DecompositionConfig dec(cfg.sigma.front());
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto itinerary = [&](int depth) {
        std::vector<int> it(static_cast<std::size_t>(depth));
        for (int& b : it) {
            b = static_cast<int>(rng() % 2);
        }
        return it;
    };

    std::vector<AttractorPoint> cloud;
    double contraction_defect = 0.0;
    double conjugacy_truncated = 0.0;
    const ExtensionConfig ecfg(2.0, cfg.K);
    for (int i = 0; i < cfg.samples; ++i) {
        const double theta = unit(rng);
        auto p = attractor_point(sys, theta, itinerary(std::max(cfg.depth, cfg.K)));
        const auto q = attractor_point(sys, theta, itinerary(cfg.depth));
        const double before = std::hypot(p.disk[0] - q.disk[0], p.disk[1] - q.disk[1]);
        const auto fp = apply_f(sys, p);
        const auto fq = apply_f(sys, q);
        const double after = std::hypot(fp.disk[0] - fq.disk[0], fp.disk[1] - fq.disk[1]);
        if (before > 0.0) {
            contraction_defect = std::max(contraction_defect, std::fabs(after / before - sys.lambda_s));
        }
        auto lhs = conjugacy_h(sys, fp, cfg.K);
        auto rhs = hat_g(sys.base, conjugacy_h(sys, p, cfg.K));
        rhs.coords.resize(lhs.coords.size());
        conjugacy_truncated = std::max(conjugacy_truncated, hat_distance(ecfg, lhs, rhs).first);
        p.backward.resize(static_cast<std::size_t>(cfg.depth) + 1);
        cloud.push_back(attractor_point(sys, p.backward, p.seed));
    }
    const auto bowen = attractor_bowen_check(sys, dec, TorusPotential::cos_plus_u(), cfg.eps.front(),
                                             cfg.samples, cfg.seed);
    const auto bracket = metric_equivalence(sys, std::max(cfg.samples, 100), cfg.seed);

    header(out, "solenoid", cfg);
    out << "# fiber_contraction_defect=" << csv_number(contraction_defect)
        << " conjugacy_defect=" << csv_number(conjugacy_truncated) << " tail_bound=" << csv_number(ecfg.tail_bound())
        << " bowen_empirical=" << csv_number(bowen.empirical_max) << " bowen_bound=" << csv_number(bowen.bound)
        << " bracket_low=" << csv_number(bracket.c_low) << " bracket_high=" << csv_number(bracket.c_high) << '\n';
    write_point_cloud(out, sys, cloud);
    return 0;
}

int cmd_gap_report(const ExperimentConfig& cfg, std::ostream& out)
{
    const auto map = parse_map(cfg.map);
    const auto phi = parse_potential(cfg.potential, map);
    const auto opts = pressure_options(cfg);
    header(out, "gap-report", cfg);
    out << "sigma,eps,n_max,p_full,p_bad,gap,holds\n";
    for (double eps : cfg.eps) {
        for (const auto& g : gap_report(map, phi, cfg.sigma, eps, cfg.n_max, opts)) {
            out << csv_join({csv_number(g.sigma), csv_number(eps), std::to_string(g.n_max),
                             csv_number(g.p_full.rate), csv_number(g.p_bad.rate), csv_number(g.gap),
                             flag(g.hypothesis_holds)})
                << '\n';
        }
    }
    return 0;
}

int cmd_check(const ExperimentConfig& cfg, std::ostream& out)
{
    const auto map = parse_map(cfg.map);
    const auto phi = parse_potential(cfg.potential, map);
    const double eps = cfg.eps.front();
    const double sigma = cfg.sigma.front();
    const DecompositionConfig dec(sigma);
    const auto opts = pressure_options(cfg);

    const auto gap = gap_report(map, phi, {sigma}, eps, cfg.n_max, opts).front();

    const int trials = std::min(cfg.samples, 50);
    std::mt19937_64 rng(cfg.seed);
    GlueOptions gopts;
    gopts.tau_cap = cfg.tau_cap;
    bool spec_ok = true;
    double worst_shadow = 0.0;
    for (int p = 0; p < trials; ++p) {
        std::vector<OrbitSegment> segs;
        for (int j = 0; j < cfg.segments; ++j) {
            segs.push_back(sample_good(map, dec, rng, cfg.length_min, cfg.length_max));
        }
        const auto plan = glue_base(map, dec, segs, eps, gopts);
        const double err = verify_shadow(map, plan);
        worst_shadow = std::max(worst_shadow, err);
        spec_ok = spec_ok && err <= eps;
    }

    BowenSampling sampling;
    sampling.n_min = cfg.length_min;
    sampling.n_max = cfg.length_max;
    sampling.seed = cfg.seed;
    const ExtensionConfig ecfg(cfg.a.front(), cfg.K);
    const auto bowen =
        verify_bowen(map, ecfg, dec, LiftedPotential::projection(phi), eps, std::min(cfg.samples, 200), sampling);
    const bool bowen_ok = std::isfinite(bowen.bound) && bowen.holds();

    const auto report = ct_hypothesis_check(gap, bowen_ok, spec_ok);
    if (cfg.format == "json") {
        json doc{{"config_hash", hex64(cfg.hash())},
                 {"seed", cfg.seed},
                 {"pass", report.pass},
                 {"specification", report.specification},
                 {"bowen", report.bowen},
                 {"gap", report.gap},
                 {"blockers", report.blockers},
                 {"label", report.label},
                 {"p_full", gap.p_full.rate},
                 {"p_bad", gap.p_bad.empty ? json(nullptr) : json(gap.p_bad.rate)},
                 {"shadow_error", worst_shadow},
                 {"bowen_empirical", bowen.empirical_max},
                 {"bowen_bound", bowen.bound + bowen.slack}};
        out << doc.dump(2) << '\n';
    } else {
        header(out, "check", cfg);
        out << "# " << report.label << '\n';
        out << "item,pass,value,limit\n";
        out << csv_join({"specification", flag(report.specification), csv_number(worst_shadow), csv_number(eps)})
            << '\n';
        out << csv_join({"bowen", flag(report.bowen), csv_number(bowen.empirical_max),
                         csv_number(bowen.bound + bowen.slack)})
            << '\n';
        out << csv_join({"gap", flag(report.gap), csv_number(gap.gap), csv_number(gap.combined_uncertainty)}) << '\n';
        out << csv_join({"overall", flag(report.pass), "", ""}) << '\n';
        for (const auto& b : report.blockers) {
            out << "# blocker: " << b << '\n';
        }
    }
    return report.pass ? 0 : 3;
}

} // namespace

// ---------------------------------------------------------------- config

std::string ExperimentConfig::canonical_json() const
{
    json j{{"map", map},
           {"potential", potential},
           {"sigma", sigma},
           {"eps", eps},
           {"n_max", n_max},
           {"grid_size", grid_size},
           {"a", a},
           {"K", K},
           {"seed", seed},
           {"samples", samples},
           {"segments", segments},
           {"length_min", length_min},
           {"length_max", length_max},
           {"tau_cap", tau_cap},
           {"collection", collection},
           {"lift", lift},
           {"lambda_s", lambda_s},
           {"r", r},
           {"depth", depth},
           {"format", format}};
    return json_text(j);
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical_json()); }

MapSystem parse_map(const std::string& spec)
{
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (name == "doubling" && arg.empty()) {
            return MapSystem::doubling();
        }
        if ((name == "mp" || name == "manneville_pomeau") && !arg.empty()) {
            return MapSystem::manneville_pomeau(to_number("map", arg));
        }
        if (name == "perturbed" && !arg.empty()) {
            return MapSystem::perturbed(to_number("map", arg));
        }
        if (name == "tabulated" && !arg.empty()) {
            return MapSystem::tabulated(number_list("map", arg));
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ValidationError("map", e.what());
    }
    throw ValidationError("map", "unknown map '" + spec + "'");
}

Potential parse_potential(const std::string& spec, const MapSystem& map)
{
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (name == "zero" && arg.empty()) {
            return Potential::zero();
        }
        if (name == "constant" && !arg.empty()) {
            return Potential::constant(to_number("potential", arg));
        }
        if (name == "geometric" && !arg.empty()) {
            return Potential::geometric(map, to_number("potential", arg));
        }
        if (name == "cosine" && !arg.empty()) {
            return Potential::cosine(to_number("potential", arg));
        }
        if (name == "tabulated") {
            const auto parts = split(arg, ':');
            if (parts.size() == 3) {
                return Potential::tabulated(number_list("potential", parts[2]), to_number("potential", parts[0]),
                                            to_number("potential", parts[1]));
            }
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ValidationError("potential", e.what());
    }
    throw ValidationError("potential", "unknown potential '" + spec + "'");
}

ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ValidationError("config", "top level must be an object");
    }
    for (const auto& [key, v] : j.items()) {
        if (key == "map") base.map = get_as<std::string>(key, v);
        else if (key == "potential") base.potential = get_as<std::string>(key, v);
        else if (key == "sigma") base.sigma = as_list(key, v);
        else if (key == "eps") base.eps = as_list(key, v);
        else if (key == "a") base.a = as_list(key, v);
        else if (key == "n_max") base.n_max = get_as<int>(key, v);
        else if (key == "grid_size") base.grid_size = get_as<int>(key, v);
        else if (key == "K") base.K = get_as<int>(key, v);
        else if (key == "seed") base.seed = get_as<std::uint64_t>(key, v);
        else if (key == "samples") base.samples = get_as<int>(key, v);
        else if (key == "segments") base.segments = get_as<int>(key, v);
        else if (key == "length_min") base.length_min = get_as<int>(key, v);
        else if (key == "length_max") base.length_max = get_as<int>(key, v);
        else if (key == "tau_cap") base.tau_cap = get_as<int>(key, v);
        else if (key == "collection") base.collection = get_as<std::string>(key, v);
        else if (key == "lift") base.lift = get_as<std::string>(key, v);
        else if (key == "lambda_s") base.lambda_s = get_as<double>(key, v);
        else if (key == "r") base.r = get_as<double>(key, v);
        else if (key == "depth") base.depth = get_as<int>(key, v);
        else if (key == "format") base.format = get_as<std::string>(key, v);
        else if (key == "output") base.output = get_as<std::string>(key, v);
        else if (key == "workers") base.workers = get_as<unsigned>(key, v);
        else throw ValidationError(key, "unknown configuration key");
    }
    return base;
}

void validate(const std::string& sub, const ExperimentConfig& cfg)
{
    if (std::find(subcommands.begin(), subcommands.end(), sub) == subcommands.end()) {
        throw ValidationError("subcommand", "unknown subcommand '" + sub + "'");
    }
    const auto map = parse_map(cfg.map);
    parse_potential(cfg.potential, map);
    if (cfg.sigma.empty()) {
        throw ValidationError("sigma", "empty list");
    }
    for (double s : cfg.sigma) {
        if (!(s > 0.0 && s < 1.0)) {
            throw ValidationError("sigma", "must lie in (0,1), got " + csv_number(s));
        }
    }
    if (cfg.eps.empty()) {
        throw ValidationError("eps", "empty list");
    }
    const double eps0 = sub == "solenoid" ? MapSystem::doubling().epsilon0() : map.epsilon0();
    for (double e : cfg.eps) {
        if (!(e > 0.0 && e <= eps0)) {
            throw ValidationError("eps", "must lie in (0, epsilon0 = " + csv_number(eps0) + "], got " + csv_number(e));
        }
    }
    if (cfg.a.empty()) {
        throw ValidationError("a", "empty list");
    }
    for (double a : cfg.a) {
        if (!(a > 1.0)) {
            throw ValidationError("a", "must be > 1, got " + csv_number(a));
        }
    }
    if (cfg.n_max < 4 || cfg.n_max > 40) throw ValidationError("n_max", "must lie in [4, 40]");
    if (cfg.grid_size < 8 * map.degree()) throw ValidationError("grid_size", "must be at least 8 * degree");
    if (cfg.K < 0 || cfg.K > 200) throw ValidationError("K", "must lie in [0, 200]");
    if (cfg.samples < 1) throw ValidationError("samples", "must be >= 1");
    if (cfg.segments < 1) throw ValidationError("segments", "must be >= 1");
    if (cfg.length_min < 2 || cfg.length_max < cfg.length_min) {
        throw ValidationError("length_min", "need 2 <= length_min <= length_max");
    }
    if (cfg.collection != "full" && cfg.collection != "good" && cfg.collection != "bad") {
        throw ValidationError("collection", "must be full, good or bad");
    }
    if (cfg.lift != "projection" && cfg.lift != "fiber_averaged") {
        throw ValidationError("lift", "must be projection or fiber_averaged");
    }
    if (!(cfg.lambda_s > 0.0 && cfg.lambda_s < 0.5)) throw ValidationError("lambda_s", "must lie in (0, 1/2)");
    if (!(cfg.r > 0.0 && cfg.lambda_s + cfg.r <= 1.0)) throw ValidationError("r", "need r > 0 and lambda_s + r <= 1");
    if (cfg.depth < 1 || cfg.depth > 60) throw ValidationError("depth", "must lie in [1, 60]");
    if (cfg.format != "csv" && cfg.format != "json") throw ValidationError("format", "must be csv or json");
    if (cfg.format == "json" && sub != "glue" && sub != "check") {
        throw ValidationError("format", "json output is available for glue and check only");
    }
    if (sub == "solenoid" && cfg.map != "doubling") {
        throw ValidationError("map", "the solenoid is built over the doubling map");
    }
}

int run_subcommand(const std::string& sub, const ExperimentConfig& cfg, std::ostream& out)
{
    validate(sub, cfg);
    if (sub == "pressure") return cmd_pressure(cfg, out);
    if (sub == "decompose") return cmd_decompose(cfg, out);
    if (sub == "glue") return cmd_glue(cfg, out);
    if (sub == "transfer") return cmd_transfer(cfg, out);
    if (sub == "extension") return cmd_extension(cfg, out);
    if (sub == "solenoid") return cmd_solenoid(cfg, out);
    if (sub == "gap-report") return cmd_gap_report(cfg, out);
    return cmd_check(cfg, out);
}

namespace {

/// Registers an option whose value is applied only when given on the command
/// line, so it overrides the JSON config.
struct Overrides {
    std::vector<std::function<void(ExperimentConfig&)>> apply;

    template <class T, class Field>
    void add(CLI::App& app, const std::string& name, Field field, const std::string& desc)
    {
        auto holder = std::make_shared<T>();
        CLI::Option* opt = app.add_option(name, *holder, desc);
        if constexpr (std::is_same_v<T, std::vector<double>>) {
            opt->delimiter(',');
        }
        apply.push_back([opt, holder, field](ExperimentConfig& cfg) {
            if (opt->count() > 0) {
                cfg.*field = *holder;
            }
        });
    }
};

} // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Numerical checks for equilibrium states of non-uniformly expanding maps", "eqstates"};
    app.fallthrough();
    app.require_subcommand(1);
    for (const auto& s : subcommands) {
        app.add_subcommand(s, describe(s));
    }

    std::string config_path;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    Overrides ov;
    using C = ExperimentConfig;
    ov.add<std::string>(app, "--map", &C::map, "doubling | mp:<alpha> | perturbed:<delta> | tabulated:<k0;k1;...>");
    ov.add<std::string>(app, "--potential", &C::potential, "zero | constant:<c> | geometric:<t> | cosine:<amp>");
    ov.add<std::vector<double>>(app, "--sigma", &C::sigma, "comma separated sigma grid");
    ov.add<std::vector<double>>(app, "--eps", &C::eps, "comma separated scales");
    ov.add<std::vector<double>>(app, "--a", &C::a, "comma separated extension weights");
    ov.add<int>(app, "--n-max", &C::n_max, "largest orbit length");
    ov.add<int>(app, "--grid-size", &C::grid_size, "transfer operator grid");
    ov.add<int>(app, "--K", &C::K, "extension truncation depth");
    ov.add<std::uint64_t>(app, "--seed", &C::seed, "random seed");
    ov.add<int>(app, "--samples", &C::samples, "sample count");
    ov.add<int>(app, "--segments", &C::segments, "segments per gluing");
    ov.add<int>(app, "--length-min", &C::length_min, "shortest sampled segment");
    ov.add<int>(app, "--length-max", &C::length_max, "longest sampled segment");
    ov.add<int>(app, "--tau-cap", &C::tau_cap, "largest transition time (negative: mixing time)");
    ov.add<std::string>(app, "--collection", &C::collection, "full | good | bad");
    ov.add<std::string>(app, "--lift", &C::lift, "projection | fiber_averaged");
    ov.add<double>(app, "--lambda-s", &C::lambda_s, "solenoid fiber contraction");
    ov.add<double>(app, "--r", &C::r, "solenoid offset radius");
    ov.add<int>(app, "--depth", &C::depth, "solenoid approximant depth");
    ov.add<std::string>(app, "--format", &C::format, "csv | json");
    ov.add<std::string>(app, "-o,--output", &C::output, "output file (default stdout)");
    ov.add<unsigned>(app, "--workers", &C::workers, "worker threads (EQSTATES_WORKERS overrides)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path, std::ios::binary);
            std::stringstream buf;
            buf << in.rdbuf();
            cfg = config_from_json(buf.str(), cfg);
        }
        for (auto& f : ov.apply) {
            f(cfg);
        }
        validate(sub, cfg);

        std::ostringstream report;
        const int code = run_subcommand(sub, cfg, report);
        if (cfg.output.empty()) {
            out << report.str();
        } else {
            std::ofstream file(cfg.output, std::ios::binary);
            if (!file) {
                throw ValidationError("output", "cannot open '" + cfg.output + "'");
            }
            file << report.str();
        }
        return code;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return 1;
    } catch (const CapacityError& e) {
        err << "capacity exceeded: " << e.what() << "; try a smaller n_max or depth\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "validation error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace eqs
