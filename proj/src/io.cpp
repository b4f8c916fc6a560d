#include "epscope/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "epscope/errors.hpp"

namespace epscope {

namespace {

using nlohmann::json;

json cx_to_json(const Cx& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

Cx json_to_cx(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im"))
        throw ConfigError(where, "expected a complex number object {\"re\":..., \"im\":...}");
    if (!j["re"].is_number() || !j["im"].is_number())
        throw ConfigError(where, "re/im must be numbers");
    return Cx{j["re"].get<double>(), j["im"].get<double>()};
}

double get_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + "." + key, "missing field");
    if (!j[key].is_number()) throw ConfigError(where + "." + key, "expected a number");
    return j[key].get<double>();
}

ComplexMatrix json_to_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw ConfigError(where, "expected a non-empty array of rows");
    const std::size_t n = j.size();
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n)
            throw ConfigError(where, "matrix must be square");
        for (std::size_t k = 0; k < n; ++k)
            m(i, k) = json_to_cx(j[i][k], where + "[" + std::to_string(i) + "][" +
                                              std::to_string(k) + "]");
    }
    return m;
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(cx_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

TwoLevelParams parse_two_level(const json& j) {
    TwoLevelParams p;
    p.eps1 = json_to_cx(j.contains("eps1") ? j["eps1"] : json{}, "model.two_level.eps1");
    p.eps2 = json_to_cx(j.contains("eps2") ? j["eps2"] : json{}, "model.two_level.eps2");
    p.omega1 = get_number(j, "omega1", "model.two_level");
    p.omega2 = get_number(j, "omega2", "model.two_level");
    p.phi1 = get_number(j, "phi1", "model.two_level");
    p.mu = get_number(j, "mu", "model.two_level");
    p.sigma1 = get_number(j, "sigma1", "model.two_level");
    p.sigma2 = get_number(j, "sigma2", "model.two_level");
    p.phi2 = get_number(j, "phi2", "model.two_level");
    return p;
}

} // namespace

MatrixFamily RunConfig::family() const {
    if (const auto* p = std::get_if<TwoLevelParams>(&model)) return to_family(*p);
    return std::get<MatrixFamily>(model);
}

const TwoLevelParams* RunConfig::two_level() const {
    return std::get_if<TwoLevelParams>(&model);
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", e.what());
    }
    if (!j.is_object()) throw ConfigError("<document>", "top level must be an object");
    if (!j.contains("model")) throw ConfigError("model", "missing field");

    RunConfig cfg;
    const json& jm = j["model"];
    const bool has_two = jm.contains("two_level");
    const bool has_gen = jm.contains("general");
    if (has_two == has_gen)
        throw ConfigError("model", "exactly one of two_level/general must be present");
    if (has_two) {
        cfg.model = parse_two_level(jm["two_level"]);
    } else {
        const json& jg = jm["general"];
        MatrixFamily f;
        f.h0 = json_to_matrix(jg.contains("h0") ? jg["h0"] : json{}, "model.general.h0");
        f.h1 = json_to_matrix(jg.contains("h1") ? jg["h1"] : json{}, "model.general.h1");
        f.a = json_to_matrix(jg.contains("a") ? jg["a"] : json{}, "model.general.a");
        f.mu = get_number(jg, "mu", "model.general");
        cfg.model = f;
    }

    if (j.contains("sweep")) {
        const json& js = j["sweep"];
        SweepBlock b;
        b.lambda_min = get_number(js, "lambda_min", "sweep");
        b.lambda_max = get_number(js, "lambda_max", "sweep");
        const double stepsd = get_number(js, "steps", "sweep");
        if (stepsd < 2 || stepsd != std::floor(stepsd))
            throw ConfigError("sweep.steps", "expected an integer >= 2");
        b.steps = static_cast<std::size_t>(stepsd);
        if (js.contains("with_vectors")) {
            if (!js["with_vectors"].is_boolean())
                throw ConfigError("sweep.with_vectors", "expected a boolean");
            b.with_vectors = js["with_vectors"].get<bool>();
        }
        if (!(b.lambda_min < b.lambda_max))
            throw ConfigError("sweep.lambda_min", "need lambda_min < lambda_max");
        cfg.sweep = b;
    }

    if (j.contains("locate")) {
        const json& jl = j["locate"];
        LocateBlock b;
        if (jl.contains("closed_form")) {
            if (!jl["closed_form"].is_boolean())
                throw ConfigError("locate.closed_form", "expected a boolean");
            b.closed_form = jl["closed_form"].get<bool>();
        }
        if (jl.contains("region")) {
            const json& jr = jl["region"];
            if (!jr.is_array() || jr.size() != 4)
                throw ConfigError("locate.region", "expected [re_min, re_max, im_min, im_max]");
            SearchRegion r;
            r.re_min = jr[0].get<double>();
            r.re_max = jr[1].get<double>();
            r.im_min = jr[2].get<double>();
            r.im_max = jr[3].get<double>();
            if (!jl.contains("grid")) throw ConfigError("locate.grid", "missing field");
            const json& jgrid = jl["grid"];
            if (!jgrid.is_array() || jgrid.size() != 2)
                throw ConfigError("locate.grid", "expected [grid_re, grid_im]");
            r.grid_re = jgrid[0].get<std::size_t>();
            r.grid_im = jgrid[1].get<std::size_t>();
            try {
                r.validate();
            } catch (const InvalidInput& e) {
                throw ConfigError("locate.region", e.what());
            }
            b.region = r;
        }
        if (!b.closed_form && !b.region)
            throw ConfigError("locate", "need either closed_form or a region");
        cfg.locate = b;
    }

    if (j.contains("encircle")) {
        const json& je = j["encircle"];
        EncircleBlock b;
        b.loop.center = json_to_cx(je.contains("center") ? je["center"] : json{},
                                   "encircle.center");
        b.loop.radius = get_number(je, "radius", "encircle");
        const double stepsd = get_number(je, "steps", "encircle");
        const double loopsd = get_number(je, "loops", "encircle");
        if (stepsd < 1 || stepsd != std::floor(stepsd))
            throw ConfigError("encircle.steps", "expected a positive integer");
        if (loopsd < 1 || loopsd != std::floor(loopsd))
            throw ConfigError("encircle.loops", "expected a positive integer");
        b.loop.steps = static_cast<std::size_t>(stepsd);
        b.loop.loops = static_cast<std::size_t>(loopsd);
        try {
            b.loop.validate();
        } catch (const InvalidInput& e) {
            throw ConfigError("encircle", e.what());
        }
        cfg.encircle = b;
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            throw ConfigError("seed", "expected a non-negative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    if (const auto* p = std::get_if<TwoLevelParams>(&cfg.model)) {
        j["model"]["two_level"] = {
            {"eps1", cx_to_json(p->eps1)},   {"eps2", cx_to_json(p->eps2)},
            {"omega1", p->omega1},           {"omega2", p->omega2},
            {"phi1", p->phi1},               {"mu", p->mu},
            {"sigma1", p->sigma1},           {"sigma2", p->sigma2},
            {"phi2", p->phi2},
        };
    } else {
        const auto& f = std::get<MatrixFamily>(cfg.model);
        j["model"]["general"] = {{"h0", matrix_to_json(f.h0)},
                                 {"h1", matrix_to_json(f.h1)},
                                 {"a", matrix_to_json(f.a)},
                                 {"mu", f.mu}};
    }
    if (cfg.sweep)
        j["sweep"] = {{"lambda_min", cfg.sweep->lambda_min},
                      {"lambda_max", cfg.sweep->lambda_max},
                      {"steps", cfg.sweep->steps},
                      {"with_vectors", cfg.sweep->with_vectors}};
    if (cfg.locate) {
        json jl;
        if (cfg.locate->closed_form) jl["closed_form"] = true;
        if (cfg.locate->region) {
            const auto& r = *cfg.locate->region;
            jl["region"] = {r.re_min, r.re_max, r.im_min, r.im_max};
            jl["grid"] = {r.grid_re, r.grid_im};
        }
        j["locate"] = jl;
    }
    if (cfg.encircle)
        j["encircle"] = {{"center", cx_to_json(cfg.encircle->loop.center)},
                         {"radius", cfg.encircle->loop.radius},
                         {"steps", cfg.encircle->loop.steps},
                         {"loops", cfg.encircle->loop.loops}};
    j["seed"] = cfg.seed;
    return j.dump(2);
}

std::vector<std::string> preset_names() {
    return {"fig1-top", "fig1-bottom", "fig1-mu0", "fig1-real-ep"};
}

RunConfig preset_config(const std::string& name) {
    TwoLevelParams p;
    p.eps1 = Cx{1.0, 0.0};
    p.eps2 = Cx{2.0, 0.0};
    p.omega1 = 1.0;
    p.omega2 = -1.0;
    p.phi1 = 0.2;
    p.sigma1 = 1.0;
    p.sigma2 = 0.0;
    p.phi2 = 0.0;
    if (name == "fig1-top") p.mu = 0.35;
    else if (name == "fig1-bottom") p.mu = 0.5;
    else if (name == "fig1-mu0") p.mu = 0.0;
    else if (name == "fig1-real-ep") p.mu = std::tan(0.4);
    else throw ConfigError("preset", "unknown preset '" + name + "'");

    RunConfig cfg;
    cfg.model = p;
    cfg.sweep = SweepBlock{0.0, 1.0, 400, false};
    cfg.locate = LocateBlock{true, std::nullopt};

    // loop around the preset's EP nearest the real axis (upper one for mu=0)
    const auto eps = ep_closed_form(p);
    const EPLocation* target = nullptr;
    for (const auto& ep : eps) {
        if (name == "fig1-mu0" && ep.lambda_c.imag() < 0.0) continue;
        if (!target ||
            std::abs(ep.lambda_c.imag()) < std::abs(target->lambda_c.imag()))
            target = &ep;
    }
    EncircleBlock e;
    e.loop.center = target->lambda_c;
    e.loop.radius = 0.1;
    e.loop.steps = 4096;
    e.loop.loops = 1;
    cfg.encircle = e;
    return cfg;
}

void write_trajectory_csv(const TrajectorySet& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open for writing: " + path);
    out << "lambda";
    for (std::size_t k = 1; k <= t.levels(); ++k)
        out << ",re_E" << k << ",im_E" << k;
    out << "\n";
    char buf[32];
    auto emit = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out << buf;
    };
    for (std::size_t i = 0; i < t.size(); ++i) {
        emit(t.lambdas[i]);
        for (std::size_t k = 0; k < t.levels(); ++k) {
            out << ',';
            emit(t.energies[i][k].real());
            out << ',';
            emit(t.energies[i][k].imag());
        }
        out << "\n";
    }
}

TrajectorySet read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("empty CSV: " + path);
    std::size_t cols = 1;
    for (char c : line)
        if (c == ',') ++cols;
    if (cols < 3 || (cols - 1) % 2 != 0)
        throw InvalidInput("malformed trajectory CSV header: " + path);
    const std::size_t levels = (cols - 1) / 2;

    TrajectorySet t;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<double> vals;
        while (std::getline(ss, field, ',')) vals.push_back(std::stod(field));
        if (vals.size() != cols) throw InvalidInput("malformed CSV row: " + line);
        t.lambdas.push_back(vals[0]);
        std::vector<Cx> row(levels);
        for (std::size_t k = 0; k < levels; ++k)
            row[k] = Cx{vals[1 + 2 * k], vals[2 + 2 * k]};
        t.energies.push_back(std::move(row));
    }
    return t;
}

std::string eps_to_json(const std::vector<EPLocation>& eps, const PairingReport& report) {
    json j;
    j["eps"] = json::array();
    for (const auto& ep : eps) {
        j["eps"].push_back({{"lambda_c", cx_to_json(ep.lambda_c)},
                            {"pair", {ep.pair.first, ep.pair.second}},
                            {"residual", ep.residual},
                            {"gap", ep.gap},
                            {"energy", cx_to_json(ep.energy)}});
    }
    j["conjugate_pairs"] = json::array();
    for (const auto& pr : report.pairs)
        j["conjugate_pairs"].push_back({pr.first, pr.second});
    j["singletons"] = report.singletons;
    return j.dump(2);
}

std::string monodromy_to_json(const MonodromyResult& r) {
    json j;
    j["permutation"] = r.permutation;
    j["phases"] = json::array();
    for (const auto& p : r.phases) j["phases"].push_back(cx_to_json(p));
    j["discretization_error"] = r.discretization_error;
    return j.dump(2);
}

std::string sweep_summary_to_json(const CrossingClass& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["crossing_lambda"] = c.crossing_lambda;
    if (std::isfinite(c.ep_distance)) j["ep_distance"] = c.ep_distance;
    else j["ep_distance"] = nullptr;
    j["min_gap"] = c.min_gap;
    return j.dump(2);
}

namespace {

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
    std::filesystem::create_directories(dir);
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open for writing: " + path);
    out << body;
}

} // namespace

int cmd_sweep(const RunConfig& config, const std::string& out_dir, std::string& err) {
    try {
        if (!config.sweep) throw ConfigError("sweep", "missing sweep block");
        const SweepBlock& b = *config.sweep;
        const MatrixFamily f = config.family();
        SolveOptions opts{config.seed};
        const TrajectorySet t =
            sweep_real(f, b.lambda_min, b.lambda_max, b.steps, b.with_vectors, opts);
        std::filesystem::create_directories(out_dir);
        write_trajectory_csv(t, (std::filesystem::path(out_dir) / "sweep.csv").string());

        std::vector<EPLocation> known;
        if (const auto* p = config.two_level()) {
            try {
                known = ep_closed_form(*p, opts);
            } catch (const InvalidInput&) {
                // no closed form available; ep_distance stays unset
            }
        }
        json summary;
        try {
            const CrossingClass c = classify_crossing(t, {0, 1}, known);
            summary = json::parse(sweep_summary_to_json(c));
        } catch (const NoPassage& e) {
            summary = {{"kind", "NO_PASSAGE"}, {"detail", e.what()}};
        }
        write_file(out_dir, "sweep_summary.json", summary.dump(2));
        return 0;
    } catch (const InvalidInput& e) {
        err = e.what();
        return 2;
    } catch (const SolverFailure& e) {
        err = e.what();
        return 3;
    }
}

int cmd_locate(const RunConfig& config, const std::string& out_dir, std::string& err) {
    try {
        if (!config.locate) throw ConfigError("locate", "missing locate block");
        const LocateBlock& b = *config.locate;
        SolveOptions opts{config.seed};
        std::vector<EPLocation> eps;
        if (b.closed_form) {
            const auto* p = config.two_level();
            if (!p)
                throw ConfigError("locate.closed_form",
                                  "closed form needs the two_level model");
            eps = ep_closed_form(*p, opts);
        } else {
            const MatrixFamily f = config.family();
            for (const Cx& cand : ep_scan(f, *b.region, opts)) {
                try {
                    eps.push_back(ep_refine(f, cand, opts));
                } catch (const RefineFailure&) {
                    // candidate did not survive refinement; drop it
                }
            }
        }
        write_file(out_dir, "eps.json", eps_to_json(eps, conjugate_pairing_check(eps)));
        return 0;
    } catch (const InvalidInput& e) {
        err = e.what();
        return 2;
    } catch (const SolverFailure& e) {
        err = e.what();
        return 3;
    }
}

int cmd_encircle(const RunConfig& config, const std::string& out_dir, std::string& err) {
    try {
        if (!config.encircle) throw ConfigError("encircle", "missing encircle block");
        SolveOptions opts{config.seed};
        const MonodromyResult r = encircle(config.family(), config.encircle->loop, opts);
        write_file(out_dir, "monodromy.json", monodromy_to_json(r));
        return 0;
    } catch (const InvalidInput& e) {
        err = e.what();
        return 2;
    } catch (const SolverFailure& e) {
        err = e.what();
        return 3;
    }
}

} // namespace epscope
