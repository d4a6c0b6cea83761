#include "schro/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "schro/fourier.hpp"

namespace schro {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- schema helpers

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw SchemaError(where + ": unknown key '" + it.key() + "'");
    }
}

double num(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw SchemaError(where + ": missing required key '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) throw SchemaError(where + "." + key + ": expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(where + "." + key + ": must be finite");
    return x;
}

double num_or(const json& j, const char* key, double dflt, const std::string& where) {
    return j.contains(key) ? num(j, key, where) : dflt;
}

long long integer(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw SchemaError(where + ": missing required key '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw SchemaError(where + "." + key + ": expected an integer");
    return v.get<long long>();
}

bool flag(const json& j, const char* key, bool dflt, const std::string& where) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_boolean()) throw SchemaError(where + "." + key + ": expected true or false");
    return j.at(key).get<bool>();
}

std::string str(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw SchemaError(where + ": missing required key '" + key + "'");
    if (!j.at(key).is_string()) throw SchemaError(where + "." + key + ": expected a string");
    return j.at(key).get<std::string>();
}

std::vector<double> num_list(const json& v, const std::string& where) {
    if (!v.is_array()) throw SchemaError(where + ": expected a list of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw SchemaError(where + ": expected a list of numbers");
        out.push_back(e.get<double>());
        if (!std::isfinite(out.back())) throw SchemaError(where + ": entries must be finite");
    }
    return out;
}

std::vector<double> point(const json& v, int d, const std::string& where) {
    if (v.is_number()) return std::vector<double>(d, v.get<double>());
    auto p = num_list(v, where);
    if (int(p.size()) != d) throw SchemaError(where + ": expected " + std::to_string(d) + " components");
    return p;
}

CMat matrix(const json& re, const json* im, const std::string& where) {
    if (!re.is_array() || re.empty()) throw SchemaError(where + ": expected a non-empty list of rows");
    const Eigen::Index n = Eigen::Index(re.size());
    CMat A(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        auto row = num_list(re[r], where);
        if (Eigen::Index(row.size()) != n) throw SchemaError(where + ": matrix must be square");
        for (Eigen::Index c = 0; c < n; ++c) A(r, c) = row[c];
    }
    if (im) {
        if (!im->is_array() || Eigen::Index(im->size()) != n) throw SchemaError(where + "_imag: shape mismatch");
        for (Eigen::Index r = 0; r < n; ++r) {
            auto row = num_list((*im)[r], where + "_imag");
            if (Eigen::Index(row.size()) != n) throw SchemaError(where + "_imag: shape mismatch");
            for (Eigen::Index c = 0; c < n; ++c) A(r, c) += kI * row[c];
        }
    }
    return A;
}

CVec vec(const json& re, const json* im, Eigen::Index n, const std::string& where) {
    auto v = num_list(re, where);
    if (Eigen::Index(v.size()) != n) throw SchemaError(where + ": expected length " + std::to_string(n));
    CVec out(n);
    for (Eigen::Index k = 0; k < n; ++k) out[k] = v[k];
    if (im) {
        auto w = num_list(*im, where + "_imag");
        if (Eigen::Index(w.size()) != n) throw SchemaError(where + "_imag: expected length " + std::to_string(n));
        for (Eigen::Index k = 0; k < n; ++k) out[k] += kI * w[k];
    }
    return out;
}

Grid parse_grid(const json& j) {
    check_keys(j, {"a", "b", "M", "d"}, "model.grid");
    Grid g;
    g.a = num(j, "a", "model.grid");
    g.b = num(j, "b", "model.grid");
    g.M = int(integer(j, "M", "model.grid"));
    g.d = j.contains("d") ? int(integer(j, "d", "model.grid")) : 1;
    try {
        g.validate();
    } catch (const SchemaError&) {
        throw;
    } catch (const SchroError& e) {
        throw SchemaError(std::string("model.grid: ") + e.what());
    }
    return g;
}

// L may be absent; every other field is checked here
void check_pgrid(const json& j) {
    const std::string w = "model.pgrid";
    check_keys(j, {"L", "R", "N", "alpha_neg", "L0"}, w);
    PGrid pg;
    pg.R = num(j, "R", w);
    pg.N = int(integer(j, "N", w));
    pg.alpha_neg = num_or(j, "alpha_neg", 10.0, w);
    pg.L0 = num_or(j, "L0", -1.0, w);
    pg.L = j.contains("L") ? num(j, "L", w) : pg.L0 - 1.0;
    try {
        pg.validate();
    } catch (const SchroError& e) {
        throw SchemaError(w + ": " + e.what());
    }
}

PGrid make_pgrid(const json& j, double T, double s_max) {
    PGrid pg;
    pg.R = j.at("R").get<double>();
    pg.N = j.at("N").get<int>();
    pg.alpha_neg = j.value("alpha_neg", 10.0);
    pg.L0 = j.value("L0", -1.0);
    pg.L = j.contains("L") ? j.at("L").get<double>() : estimate_domain(T, s_max, pg.L0);
    if (!(pg.L < pg.L0)) pg.L = pg.L0 - 1.0;
    pg.validate();
    return pg;
}

bool engine_allowed(ModelKind k, Engine e) {
    switch (k) {
        case ModelKind::Heat: return true;
        case ModelKind::Convection: return e == Engine::ExactDiagonal;
        case ModelKind::BlackScholes: return e == Engine::ExactDiagonal || e == Engine::DenseExpm;
        case ModelKind::FokkerPlanck:
        case ModelKind::LinearODE:
        case ModelKind::Liouville: return e != Engine::Trotter1;
        case ModelKind::Boltzmann: return e == Engine::Trotter1 || e == Engine::DenseExpm;
    }
    return false;
}

ModelKind parse_kind(const std::string& s) {
    for (int k = 0; k <= int(ModelKind::LinearODE); ++k)
        if (s == model_kind_name(ModelKind(k))) return ModelKind(k);
    throw SchemaError("model.kind: unknown model '" + s + "'");
}

}  // namespace

const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::Heat: return "Heat";
        case ModelKind::Convection: return "Convection";
        case ModelKind::BlackScholes: return "BlackScholes";
        case ModelKind::FokkerPlanck: return "FokkerPlanck";
        case ModelKind::Boltzmann: return "Boltzmann";
        case ModelKind::Liouville: return "Liouville";
        case ModelKind::LinearODE: return "LinearODE";
    }
    return "?";
}

// ---------------------------------------------------------------- function catalog

FieldSpec parse_field(const json& j, const Grid& grid, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected a function object with key 'fn'");
    const std::string fn = str(j, "fn", where);
    const int d = grid.d;
    FieldSpec out;
    if (fn == "sin_pi" || fn == "cos_pi") {
        check_keys(j, {"fn", "amp", "k"}, where);
        const double amp = num_or(j, "amp", 1.0, where);
        const double w = kPi * num_or(j, "k", 1.0, where);
        const bool is_sin = fn == "sin_pi";
        auto base = [=](double x) { return is_sin ? std::sin(w * x) : std::cos(w * x); };
        auto dbase = [=](double x) { return is_sin ? w * std::cos(w * x) : -w * std::sin(w * x); };
        out.f = [=](const std::vector<double>& x) {
            double v = amp;
            for (double xi : x) v *= base(xi);
            return v;
        };
        out.grad = [=](const std::vector<double>& x) {
            std::vector<double> g(x.size());
            for (std::size_t l = 0; l < x.size(); ++l) {
                double v = amp * dbase(x[l]);
                for (std::size_t m = 0; m < x.size(); ++m)
                    if (m != l) v *= base(x[m]);
                g[l] = v;
            }
            return g;
        };
        auto f = out.f;
        out.lap = [=](const std::vector<double>& x) { return -double(d) * w * w * f(x); };
    } else if (fn == "const") {
        check_keys(j, {"fn", "value"}, where);
        const double c = num(j, "value", where);
        out.f = [=](const std::vector<double>&) { return c; };
        out.grad = [=](const std::vector<double>& x) { return std::vector<double>(x.size(), 0.0); };
        out.lap = [](const std::vector<double>&) { return 0.0; };
    } else if (fn == "gaussian") {
        check_keys(j, {"fn", "amp", "center", "width"}, where);
        const double amp = num_or(j, "amp", 1.0, where);
        const double s = num(j, "width", where);
        if (!(s > 0.0)) throw SchemaError(where + ".width: must be > 0");
        const auto c = j.contains("center") ? point(j.at("center"), d, where + ".center") : std::vector<double>(d, 0.0);
        out.f = [=](const std::vector<double>& x) {
            double r2 = 0.0;
            for (int l = 0; l < d; ++l) r2 += (x[l] - c[l]) * (x[l] - c[l]);
            return amp * std::exp(-0.5 * r2 / (s * s));
        };
        auto f = out.f;
        out.grad = [=](const std::vector<double>& x) {
            double v = f(x);
            std::vector<double> g(d);
            for (int l = 0; l < d; ++l) g[l] = -(x[l] - c[l]) / (s * s) * v;
            return g;
        };
        out.lap = [=](const std::vector<double>& x) {
            double r2 = 0.0;
            for (int l = 0; l < d; ++l) r2 += (x[l] - c[l]) * (x[l] - c[l]);
            return (r2 / (s * s * s * s) - d / (s * s)) * f(x);
        };
    } else if (fn == "quadratic") {
        check_keys(j, {"fn", "coef"}, where);
        const double c = num_or(j, "coef", 1.0, where);
        out.f = [=](const std::vector<double>& x) {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            return 0.5 * c * r2;
        };
        out.grad = [=](const std::vector<double>& x) {
            std::vector<double> g(x);
            for (double& v : g) v *= c;
            return g;
        };
        out.lap = [=](const std::vector<double>&) { return c * d; };
    } else if (fn == "samples") {
        check_keys(j, {"fn", "values"}, where);
        auto vals = num_list(j.at("values"), where + ".values");
        if ((long long)vals.size() != grid.size())
            throw SchemaError(where + ".values: expected " + std::to_string(grid.size()) + " samples");
        const Grid g = grid;
        out.f = [g, vals](const std::vector<double>& x) {
            std::vector<int> idx(g.d);
            for (int l = 0; l < g.d; ++l) idx[l] = int(std::llround((x[l] - g.a) / g.dx())) % g.M;
            return vals[std::size_t(g.flatten(idx))];
        };
    } else {
        throw SchemaError(where + ".fn: unknown function '" + fn + "'");
    }
    return out;
}

VectorField parse_vector_field(const json& j, int d, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected a function object with key 'fn'");
    const std::string fn = str(j, "fn", where);
    if (fn == "linear") {
        check_keys(j, {"fn", "coef"}, where);
        const double c = num(j, "coef", where);
        return [c](const std::vector<double>& q) {
            std::vector<double> f(q);
            for (double& v : f) v *= c;
            return f;
        };
    }
    if (fn == "const") {
        check_keys(j, {"fn", "value"}, where);
        auto v = point(j.at("value"), d, where + ".value");
        return [v](const std::vector<double>&) { return v; };
    }
    throw SchemaError(where + ".fn: unknown vector field '" + fn + "'");
}

// ---------------------------------------------------------------- config

namespace {

void check_params(ModelKind kind, const json& p, const std::optional<Grid>& grid) {
    const std::string w = "model.params";
    switch (kind) {
        case ModelKind::Heat:
            check_keys(p, {"V", "u0"}, w);
            if (p.contains("V")) parse_field(p.at("V"), *grid, w + ".V");
            parse_field(p.at("u0"), *grid, w + ".u0");
            break;
        case ModelKind::Convection: {
            check_keys(p, {"u0", "Np"}, w);
            parse_field(p.at("u0"), *grid, w + ".u0");
            long long np = p.contains("Np") ? integer(p, "Np", w) : 16;
            if (np < 4 || !is_pow2(np)) throw SchemaError(w + ".Np: must be a power of two >= 4");
            break;
        }
        case ModelKind::BlackScholes:
            check_keys(p, {"r", "sigma", "V0"}, w);
            num(p, "r", w);
            if (!(num(p, "sigma", w) > 0.0)) throw SchemaError(w + ".sigma: must be > 0");
            if (grid->d != 1) throw SchemaError("model.grid.d: Black-Scholes needs d = 1");
            parse_field(p.at("V0"), *grid, w + ".V0");
            break;
        case ModelKind::FokkerPlanck: {
            check_keys(p, {"V", "sigma", "form", "f0"}, w);
            parse_field(p.at("V"), *grid, w + ".V");
            if (!(num(p, "sigma", w) > 0.0)) throw SchemaError(w + ".sigma: must be > 0");
            std::string form = p.contains("form") ? str(p, "form", w) : "Conservation";
            if (form != "Conservation" && form != "HeatForm")
                throw SchemaError(w + ".form: expected Conservation or HeatForm");
            parse_field(p.at("f0"), *grid, w + ".f0");
            if (grid->size() > 4096) throw SchemaError("model.grid: Fokker-Planck needs M^d <= 4096");
            break;
        }
        case ModelKind::Boltzmann:
            check_keys(p, {"quadrature", "f0"}, w);
            if (p.contains("quadrature")) {
                const json& q = p.at("quadrature");
                check_keys(q, {"points", "weights"}, w + ".quadrature");
                QuadratureRule rule;
                if (!q.contains("points") || !q.at("points").is_array())
                    throw SchemaError(w + ".quadrature.points: expected a list of points");
                for (const auto& pt : q.at("points")) rule.points.push_back(num_list(pt, w + ".quadrature.points"));
                rule.weights = num_list(q.at("weights"), w + ".quadrature.weights");
                try {
                    rule.validate(grid->d);
                } catch (const SchroError& e) {
                    throw SchemaError(w + ".quadrature: " + e.what());
                }
            } else if (grid->d != 1) {
                throw SchemaError(w + ".quadrature: required when d > 1");
            }
            parse_field(p.at("f0"), *grid, w + ".f0");
            break;
        case ModelKind::Liouville: {
            check_keys(p, {"F", "q0", "omega"}, w);
            parse_vector_field(p.at("F"), grid->d, w + ".F");
            auto q0 = point(p.at("q0"), grid->d, w + ".q0");
            double om = num(p, "omega", w);
            if (!(om > 0.0)) throw SchemaError(w + ".omega: must be > 0");
            for (double q : q0)
                if (q < grid->a + 3 * om || q > grid->b - 3 * om)
                    throw SchemaError(w + ".q0: must lie at least 3 omega inside the grid");
            if (grid->size() > 4096) throw SchemaError("model.grid: Liouville needs M^d <= 4096");
            break;
        }
        case ModelKind::LinearODE: {
            check_keys(p, {"A", "A_imag", "b", "b_imag", "u0", "u0_imag"}, w);
            if (!p.contains("A")) throw SchemaError(w + ": missing required key 'A'");
            if (!p.contains("u0")) throw SchemaError(w + ": missing required key 'u0'");
            CMat A = matrix(p.at("A"), p.contains("A_imag") ? &p.at("A_imag") : nullptr, w + ".A");
            vec(p.at("u0"), p.contains("u0_imag") ? &p.at("u0_imag") : nullptr, A.rows(), w + ".u0");
            if (p.contains("b")) vec(p.at("b"), p.contains("b_imag") ? &p.at("b_imag") : nullptr, A.rows(), w + ".b");
            if (A.rows() > 512) throw SchemaError(w + ".A: dimension must be <= 512");
            break;
        }
    }
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig c;
    c.source = j;
    check_keys(j, {"model", "engine", "recovery", "outputs", "out_dir", "seed"}, "config");
    if (!j.contains("model")) throw SchemaError("config: missing required key 'model'");
    if (!j.contains("engine")) throw SchemaError("config: missing required key 'engine'");
    const json& m = j.at("model");
    check_keys(m, {"kind", "grid", "pgrid", "params"}, "model");
    c.kind = parse_kind(str(m, "kind", "model"));
    const bool ode = c.kind == ModelKind::LinearODE;
    if (!ode) {
        if (!m.contains("grid")) throw SchemaError("model: missing required key 'grid'");
        c.grid = parse_grid(m.at("grid"));
    } else if (m.contains("grid")) {
        throw SchemaError("model.grid: not used by LinearODE");
    }
    if (c.kind == ModelKind::Convection) {
        if (m.contains("pgrid")) throw SchemaError("model.pgrid: Convection uses the fixed sin(p) lattice on [-pi, pi)");
    } else if (m.contains("pgrid")) {
        check_pgrid(m.at("pgrid"));
        c.pgrid = m.at("pgrid");
    } else if (c.kind != ModelKind::LinearODE && c.kind != ModelKind::Liouville) {
        throw SchemaError("model: missing required key 'pgrid'");
    }
    if (!m.contains("params")) throw SchemaError("model: missing required key 'params'");
    c.params = m.at("params");
    check_params(c.kind, c.params, c.grid);

    const json& e = j.at("engine");
    check_keys(e, {"engine", "dt", "T", "blowup_factor"}, "engine");
    c.plan.engine = parse_engine(str(e, "engine", "engine"));
    if (!engine_allowed(c.kind, c.plan.engine))
        throw SchemaError(std::string("engine: ") + engine_name(c.plan.engine) + " is not available for " +
                          model_kind_name(c.kind));
    c.plan.T = num(e, "T", "engine");
    c.plan.dt = e.contains("dt") ? num(e, "dt", "engine") : c.plan.T;
    c.plan.blowup_factor = num_or(e, "blowup_factor", 1e6, "engine");
    if (!(c.plan.blowup_factor > 1.0)) throw SchemaError("engine.blowup_factor: must be > 1");

    if (j.contains("recovery")) {
        const json& r = j.at("recovery");
        check_keys(r, {"kind", "p_star"}, "recovery");
        std::string k = str(r, "kind", "recovery");
        if (k == "IntegrateP")
            c.recovery = Recovery::integrate();
        else if (k == "PointP")
            c.recovery = Recovery::point();
        else
            throw SchemaError("recovery.kind: expected IntegrateP or PointP");
        if (r.contains("p_star")) {
            if (k != "PointP") throw SchemaError("recovery.p_star: only valid for PointP");
            double ps = num(r, "p_star", "recovery");
            if (!(ps > 0.0)) throw SchemaError("recovery.p_star: must be > 0");
            c.recovery.p_star = ps;
        }
    }

    std::vector<double> times;
    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        check_keys(o, {"snapshots", "diagnostics"}, "outputs");
        if (o.contains("snapshots")) times = num_list(o.at("snapshots"), "outputs.snapshots");
        if (o.contains("diagnostics")) {
            const json& d = o.at("diagnostics");
            const std::string w = "outputs.diagnostics";
            check_keys(d, {"norm", "mass", "error_vs_exact", "mode_profile"}, w);
            c.diag_norm = flag(d, "norm", true, w);
            c.diag_mass = flag(d, "mass", true, w);
            c.diag_error = flag(d, "error_vs_exact", true, w);
            if (d.contains("mode_profile")) {
                const json& mp = d.at("mode_profile");
                check_keys(mp, {"axis", "l_star", "p_star"}, w + ".mode_profile");
                ProfileSpec ps;
                std::string ax = mp.contains("axis") ? str(mp, "axis", w + ".mode_profile") : "p_at_mode";
                if (ax == "p_at_mode")
                    ps.axis = ProfileSpec::Axis::PAtMode;
                else if (ax == "x_at_p")
                    ps.axis = ProfileSpec::Axis::XAtP;
                else
                    throw SchemaError(w + ".mode_profile.axis: expected p_at_mode or x_at_p");
                if (mp.contains("l_star")) {
                    ps.l_star = integer(mp, "l_star", w + ".mode_profile");
                    if (*ps.l_star < 0 || *ps.l_star >= c.grid.value_or(Grid{}).size())
                        throw SchemaError(w + ".mode_profile.l_star: out of range");
                }
                if (mp.contains("p_star")) ps.p_star = num(mp, "p_star", w + ".mode_profile");
                if (c.kind != ModelKind::Heat && c.kind != ModelKind::BlackScholes && c.kind != ModelKind::FokkerPlanck)
                    throw SchemaError(w + ".mode_profile: only available for Heat, BlackScholes and FokkerPlanck");
                c.profile = ps;
            }
        }
    }
    times.push_back(c.plan.T);
    std::sort(times.begin(), times.end());
    std::vector<double> uniq;
    for (double t : times)
        if (uniq.empty() || std::abs(t - uniq.back()) > 1e-12 * std::max(1.0, c.plan.T)) uniq.push_back(t);
    c.plan.snapshot_times = uniq;
    const bool stepping = c.plan.engine == Engine::Trotter1 || c.plan.engine == Engine::UpwindFD;
    c.plan.validate(stepping);
    if (stepping) c.plan.snapshot_steps();

    if (j.contains("out_dir")) c.out_dir = str(j, "out_dir", "config");
    if (j.contains("seed")) c.seed = integer(j, "seed", "config");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    if (j.is_object() && j.contains("manifest_version")) {
        if (!j.contains("config")) throw SchemaError("manifest has no 'config' entry");
        return parse_config(j.at("config"));
    }
    return parse_config(j);
}

CostQuery parse_cost_query(const json& j) {
    const std::string w = "query";
    check_keys(j, {"method", "d", "m", "m_p", "T", "dt", "dx", "dp", "s", "a_max", "N", "epsilon", "N_A"}, w);
    CostQuery q;
    q.method = parse_cost_method(str(j, "method", w));
    auto opt = [&](const char* k) -> std::optional<double> {
        if (!j.contains(k)) return std::nullopt;
        return num(j, k, w);
    };
    q.d = opt("d");
    q.m = opt("m");
    q.m_p = opt("m_p");
    q.T = opt("T");
    q.dt = opt("dt");
    q.dx = opt("dx");
    q.dp = opt("dp");
    q.s = opt("s");
    q.a_max = opt("a_max");
    q.N = opt("N");
    q.epsilon = opt("epsilon");
    q.N_A = opt("N_A");
    return q;
}

// ---------------------------------------------------------------- output

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw SchroError("cannot write '" + tmp + "'");
        out << content;
        if (!out) throw SchroError("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw SchroError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

namespace {

void coord_header(std::ostringstream& os, int d) {
    for (int l = 0; l < d; ++l) os << (l ? "," : "") << "x" << (l + 1);
}

void coord_row(std::ostringstream& os, const Grid& g, long long i) {
    auto j = g.unflatten(i);
    for (int l = 0; l < g.d; ++l) os << (l ? "," : "") << format_double(g.x(j[l]));
}

}  // namespace

std::string emit_profile(const WarpedState& w, ProfileSpec::Axis axis, double index_or_p) {
    std::ostringstream os;
    const int N = w.pgrid.N;
    if (axis == ProfileSpec::Axis::PAtMode) {
        long long l = std::llround(index_or_p);
        if (l < 0 || l >= w.nx) throw SchroError("emit_profile: mode index " + std::to_string(l) + " out of range");
        CVec c = w.grid ? x_spectral(w) : w.values;
        os << "p,abs\n";
        for (int j = 0; j < N; ++j)
            os << format_double(w.pgrid.p(j)) << ',' << format_double(std::abs(c[l * N + j])) << '\n';
        return os.str();
    }
    int j = p_index(w.pgrid, index_or_p);
    if (w.grid) {
        coord_header(os, w.grid->d);
        os << ",abs\n";
    } else {
        os << "index,abs\n";
    }
    for (long long i = 0; i < w.nx; ++i) {
        if (w.grid)
            coord_row(os, *w.grid, i);
        else
            os << i;
        os << ',' << format_double(std::abs(w.values[i * N + j])) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------- run

namespace {

struct Snapshot {
    double t;
    CVec u;
    std::optional<WarpedState> w;
};

struct Outcome {
    std::vector<Snapshot> snaps;
    bool blew_up = false;
    double blowup_time = 0.0;
    std::function<CVec(double)> exact;
    std::function<double(const CVec&)> mass;
    std::vector<std::string> extra_names;
    std::function<std::vector<double>(double, const CVec&)> extra;
    std::function<double(double, const CVec&)> moment_error;  // replaces the L2 error when set
    int ordinates = 0;  // Boltzmann snapshot layout
    CVec mode_source;   // x-register data used to pick the dominant mode
    json resolved = json::object();
};

json pgrid_json(const PGrid& pg) {
    return {{"L", pg.L}, {"R", pg.R}, {"N", pg.N}, {"alpha_neg", pg.alpha_neg}, {"L0", pg.L0}};
}

CVec sample(const FieldSpec& f, const Grid& g) { return sample_function(f.f, g).cast<cplx>(); }

WarpedState state_of(const CVec& values, long long nx, const PGrid& pg, std::optional<Grid> g, double t) {
    WarpedState w;
    w.values = values;
    w.nx = nx;
    w.pgrid = pg;
    w.grid = g;
    w.t = t;
    return w;
}

void check_dense(long long dim) {
    if (dim > 4096)
        throw SchemaError("engine: DenseExpm needs a state dimension <= 4096, got " + std::to_string(dim));
}

// Runs a warped evolution through the chosen engine and returns the warped states at the plan's times.
struct WarpedRun {
    std::vector<WarpedState> states;
    bool blew_up = false;
    double blowup_time = 0.0;
};

WarpedRun from_trajectory(const Trajectory& tr, long long nx, const PGrid& pg, std::optional<Grid> g) {
    WarpedRun r;
    for (std::size_t k = 0; k < tr.states.size(); ++k) r.states.push_back(state_of(tr.states[k], nx, pg, g, tr.times[k]));
    r.blew_up = tr.blew_up;
    r.blowup_time = tr.blowup_time;
    return r;
}

Recovery resolve_recovery(const Recovery& rec, const PGrid& pg, std::optional<double> ode_p_star, json& resolved) {
    Recovery r = rec;
    if (r.kind == Recovery::Kind::PointP && !r.p_star) r.p_star = ode_p_star ? *ode_p_star : default_p_star(pg);
    if (r.kind == Recovery::Kind::PointP) {
        p_index(pg, *r.p_star);
        resolved["p_star"] = *r.p_star;
    }
    resolved["recovery"] = r.kind == Recovery::Kind::PointP ? "PointP" : "IntegrateP";
    return r;
}

Outcome run_heat(const ExperimentConfig& c) {
    Outcome o;
    const Grid g = *c.grid;
    const json& p = c.params;
    FieldSpec V = p.contains("V") ? parse_field(p.at("V"), g, "V") : parse_field(json{{"fn", "const"}, {"value", 0.0}}, g, "V");
    CVec u0 = sample(parse_field(p.at("u0"), g, "u0"), g);
    RVec Vn = sample_function(V.f, g);
    auto [amps, speeds] = heat_mode_scan(g, u0);
    double s_max = dominant_speed(amps, (speeds.array() - Vn.minCoeff()).matrix());
    PGrid pg = make_pgrid(c.pgrid, c.plan.T, s_max);
    o.resolved["pgrid"] = pgrid_json(pg);
    o.resolved["s_max"] = s_max;
    HeatModel m = build_heat(V.f, g, pg);
    Recovery rec = resolve_recovery(c.recovery, pg, std::nullopt, o.resolved);
    WarpedState w0 = extend_initial(u0, pg, g);

    WarpedRun run;
    switch (c.plan.engine) {
        case Engine::ExactDiagonal:
            for (double t : c.plan.snapshot_times) run.states.push_back(heat_evolve_exact(m, w0, t));
            break;
        case Engine::Trotter1:
            run = from_trajectory(evolve_trotter(m.trotter(), c.plan, w0.values), g.size(), pg, g);
            break;
        case Engine::UpwindFD: {
            FDTransport fd = build_fd_transport(m.fd_generator(), pg, c.plan.dt);
            o.resolved["fd_admissible_dt"] = pg.dp() / fd.rho;
            run = from_trajectory(evolve_upwind_fd(fd, c.plan, w0.values), g.size(), pg, g);
            break;
        }
        case Engine::DenseExpm:
            check_dense(g.size() * pg.N);
            run = from_trajectory(evolve_dense(kI * m.H.to_dense(), c.plan, w0.values), g.size(), pg, g);
            break;
    }
    for (auto& w : run.states) o.snaps.push_back({w.t, recover(w, rec), w});
    o.blew_up = run.blew_up;
    o.blowup_time = run.blowup_time;

    if (m.v_constant) {
        CVec c0 = u0;
        grid_transform(c0.data(), g, 1, 1, true);
        RVec rate = (Vn[0] - m.mu2.array()).matrix();
        o.exact = [=](double t) {
            CVec cc = c0;
            for (Eigen::Index i = 0; i < cc.size(); ++i) cc[i] *= std::exp(rate[i] * t);
            grid_transform(cc.data(), g, 1, 1, false);
            return cc;
        };
    } else if (g.size() <= 1024) {
        CMat A = m.x_generator();
        o.exact = [=](double t) { return dense_expm_oracle(A, u0, t); };
    }
    const double vol = std::pow(g.dx(), g.d);
    o.mass = [vol](const CVec& u) { return u.real().sum() * vol; };
    o.mode_source = u0;
    return o;
}

Outcome run_convection(const ExperimentConfig& c) {
    Outcome o;
    const Grid g = *c.grid;
    int Np = c.params.contains("Np") ? c.params.at("Np").get<int>() : 16;
    CVec u0 = sample(parse_field(c.params.at("u0"), g, "u0"), g);
    ConvectionModel m = build_convection(g, Np);
    for (double t : c.plan.snapshot_times) o.snaps.push_back({t, convection_evolve_sin(m, u0, t), std::nullopt});
    o.exact = [m, u0](double t) { return convection_evolve_direct(m, u0, t); };
    const double vol = std::pow(g.dx(), g.d);
    o.mass = [vol](const CVec& u) { return u.real().sum() * vol; };
    o.resolved["Np"] = Np;
    return o;
}

Outcome run_black_scholes(const ExperimentConfig& c) {
    Outcome o;
    const Grid g = *c.grid;
    const json& p = c.params;
    double r = p.at("r").get<double>(), sigma = p.at("sigma").get<double>();
    CVec V0 = sample(parse_field(p.at("V0"), g, "V0"), g);
    CVec c0 = V0;
    grid_transform(c0.data(), g, 1, 1, true);
    RVec mu = g.mu();
    RVec speed = (0.5 * sigma * sigma * mu.array().square() + r).matrix();
    double s_max = dominant_speed(c0.cwiseAbs(), speed);
    PGrid pg = make_pgrid(c.pgrid, c.plan.T, s_max);
    o.resolved["pgrid"] = pgrid_json(pg);
    BlackScholesModel m = build_black_scholes(r, sigma, g, pg);
    Recovery rec = resolve_recovery(c.recovery, pg, std::nullopt, o.resolved);
    if (c.plan.engine == Engine::ExactDiagonal) {
        for (double t : c.plan.snapshot_times) {
            WarpedState w = bs_evolve(m, V0, t);
            o.snaps.push_back({t, recover(w, rec), w});
        }
    } else {
        check_dense(g.size() * pg.N);
        WarpedState w0 = extend_initial(V0, pg, g);
        WarpedRun run = from_trajectory(evolve_dense(kI * m.H.to_dense(), c.plan, w0.values), g.size(), pg, g);
        for (auto& w : run.states) o.snaps.push_back({w.t, recover(w, rec), w});
        o.blew_up = run.blew_up;
        o.blowup_time = run.blowup_time;
    }
    o.exact = [m, V0](double t) { return bs_exact(m, V0, t); };
    const double vol = g.dx();
    o.mass = [vol](const CVec& u) { return u.real().sum() * vol; };
    o.mode_source = V0;
    return o;
}

Outcome run_fokker_planck(const ExperimentConfig& c) {
    Outcome o;
    const Grid g = *c.grid;
    const json& p = c.params;
    FieldSpec V = parse_field(p.at("V"), g, "V");
    double sigma = p.at("sigma").get<double>();
    FPForm form = p.value("form", std::string("Conservation")) == "HeatForm" ? FPForm::HeatForm : FPForm::Conservation;
    CVec f0 = sample(parse_field(p.at("f0"), g, "f0"), g);
    FokkerPlanckOptions opt;
    opt.gradV = V.grad;
    opt.lapV = V.lap;
    // the p-lattice is needed to build the model, so the speed estimate uses a provisional grid
    PGrid probe = make_pgrid(c.pgrid, c.plan.T, 0.0);
    FokkerPlanckModel m = build_fokker_planck(V.f, sigma, g, probe, form, opt);
    double s_max = spectral_radius(m.Hx);
    PGrid pg = make_pgrid(c.pgrid, c.plan.T, s_max);
    if (!c.pgrid.contains("L")) m = build_fokker_planck(V.f, sigma, g, pg, form, opt);
    o.resolved["pgrid"] = pgrid_json(pg);
    o.resolved["s_max"] = s_max;
    Recovery rec = resolve_recovery(c.recovery, pg, std::nullopt, o.resolved);
    CVec psi0 = m.to_psi.cast<cplx>().cwiseProduct(f0);
    WarpedState w0 = extend_initial(psi0, pg, g);
    WarpedRun run;
    switch (c.plan.engine) {
        case Engine::ExactDiagonal:
            for (double t : c.plan.snapshot_times) {
                WarpedState w = fp_evolve(m, f0, t);
                w.t = t;
                run.states.push_back(w);
            }
            break;
        case Engine::UpwindFD: {
            FDTransport fd = build_fd_transport(CMat(-m.Hx), pg, c.plan.dt);
            o.resolved["fd_admissible_dt"] = pg.dp() / fd.rho;
            run = from_trajectory(evolve_upwind_fd(fd, c.plan, w0.values), g.size(), pg, g);
            break;
        }
        case Engine::DenseExpm:
            check_dense(g.size() * pg.N);
            run = from_trajectory(evolve_dense(kI * m.H.to_dense(), c.plan, w0.values), g.size(), pg, g);
            break;
        case Engine::Trotter1: break;
    }
    for (auto& w : run.states) o.snaps.push_back({w.t, fp_recover(m, w, rec), w});
    o.blew_up = run.blew_up;
    o.blowup_time = run.blowup_time;
    CMat G = -m.Hx;
    RVec to = m.to_psi, from = m.from_psi;
    o.exact = [=](double t) {
        CVec psi = dense_expm_oracle(G, to.cast<cplx>().cwiseProduct(f0), t);
        return CVec(from.cast<cplx>().cwiseProduct(psi));
    };
    const double vol = std::pow(g.dx(), g.d);
    o.mass = [vol](const CVec& u) { return u.real().sum() * vol; };
    o.mode_source = psi0;
    return o;
}

QuadratureRule quadrature_of(const json& p) {
    if (!p.contains("quadrature")) return QuadratureRule::two_point();
    QuadratureRule q;
    for (const auto& pt : p.at("quadrature").at("points")) q.points.push_back(pt.get<std::vector<double>>());
    q.weights = p.at("quadrature").at("weights").get<std::vector<double>>();
    return q;
}

Outcome run_boltzmann(const ExperimentConfig& c) {
    Outcome o;
    const Grid g = *c.grid;
    QuadratureRule quad = quadrature_of(c.params);
    CVec f1 = sample(parse_field(c.params.at("f0"), g, "f0"), g);
    const int No = int(quad.size());
    const long long nx = g.size();
    CVec f0(No * nx);
    for (int k = 0; k < No; ++k) f0.segment(k * nx, nx) = f1;
    // collision eigenvalues lie in [-1, 0]
    PGrid pg = make_pgrid(c.pgrid, c.plan.T, 1.0);
    o.resolved["pgrid"] = pgrid_json(pg);
    BoltzmannModel m = build_boltzmann(quad, g, pg);
    Recovery rec = resolve_recovery(c.recovery, pg, std::nullopt, o.resolved);
    WarpedState w0 = extend_initial(boltzmann_scale(m, f0), pg);
    WarpedRun run;
    if (c.plan.engine == Engine::Trotter1) {
        run = from_trajectory(evolve_boltzmann(m, c.plan, w0.values), No * nx, pg, std::nullopt);
    } else {
        check_dense(No * nx * pg.N);
        run = from_trajectory(evolve_dense(kI * m.H.to_dense(), c.plan, w0.values), No * nx, pg, std::nullopt);
    }
    for (auto& w : run.states) o.snaps.push_back({w.t, boltzmann_unscale(m, recover(w, rec)), w});
    o.blew_up = run.blew_up;
    o.blowup_time = run.blowup_time;
    o.mass = [m](const CVec& f) { return boltzmann_mass(m, f); };
    o.ordinates = No;
    return o;
}

// shared by LinearODE and Liouville
Outcome run_ode(const ExperimentConfig& c, const LinearSystem& input) {
    Outcome o;
    LinearSystem sys = input.has_source() ? augment_inhomogeneous(input) : input;
    const Eigen::Index n0 = input.n();
    HermitianSplit split = hermitian_split(sys.A);
    PGrid pg;
    if (c.pgrid.is_null()) {
        pg = default_pgrid(split, sys.u0, c.plan.T);
    } else {
        Eigen::SelfAdjointEigenSolver<CMat> es(split.H1, Eigen::EigenvaluesOnly);
        pg = make_pgrid(c.pgrid, c.plan.T, std::max(0.0, -es.eigenvalues().minCoeff()));
    }
    o.resolved["pgrid"] = pgrid_json(pg);
    auto bounds = weighted_spectral_bounds(split.H1, sys.u0);
    std::optional<double> ps;
    if (c.recovery.kind == Recovery::Kind::PointP && !c.recovery.p_star)
        ps = p_star_for(pg, bounds.second, c.plan.T);
    Recovery rec = resolve_recovery(c.recovery, pg, ps, o.resolved);
    SchrodingerisedSystem S = assemble_schrodingerised(split, pg, sys.u0);
    WarpedRun run;
    switch (c.plan.engine) {
        case Engine::ExactDiagonal: {
            run.states = evolve_schrodingerised(S, c.plan.snapshot_times);
            break;
        }
        case Engine::UpwindFD: {
            FDTransport fd = build_fd_transport(sys.A, pg, c.plan.dt);
            o.resolved["fd_admissible_dt"] = pg.dp() / fd.rho;
            run = from_trajectory(evolve_upwind_fd(fd, c.plan, S.w0.values), sys.n(), pg, std::nullopt);
            break;
        }
        case Engine::DenseExpm:
            check_dense(sys.n() * pg.N);
            run = from_trajectory(evolve_dense(kI * S.H.to_dense(), c.plan, S.w0.values), sys.n(), pg, std::nullopt);
            break;
        case Engine::Trotter1: break;
    }
    for (auto& w : run.states) o.snaps.push_back({w.t, CVec(recover(w, rec).head(n0)), w});
    o.blew_up = run.blew_up;
    o.blowup_time = run.blowup_time;
    CMat A = sys.A;
    CVec u0 = sys.u0;
    o.exact = [A, u0, n0](double t) { return CVec(dense_expm_oracle(A, u0, t).head(n0)); };
    return o;
}

Outcome run_linear_ode(const ExperimentConfig& c) {
    const json& p = c.params;
    LinearSystem sys;
    sys.A = matrix(p.at("A"), p.contains("A_imag") ? &p.at("A_imag") : nullptr, "A");
    sys.u0 = vec(p.at("u0"), p.contains("u0_imag") ? &p.at("u0_imag") : nullptr, sys.A.rows(), "u0");
    if (p.contains("b")) sys.b = vec(p.at("b"), p.contains("b_imag") ? &p.at("b_imag") : nullptr, sys.A.rows(), "b");
    sys.validate();
    return run_ode(c, sys);
}

Outcome run_liouville(const ExperimentConfig& c) {
    const Grid g = *c.grid;
    const json& p = c.params;
    VectorField F = parse_vector_field(p.at("F"), g.d, "F");
    auto q0 = point(p.at("q0"), g.d, "q0");
    double omega = p.at("omega").get<double>();
    LiouvilleModel m = build_liouville(F, g, q0, omega);
    Outcome o = run_ode(c, m.sys);
    CVec rho0 = m.sys.u0;
    o.exact = [=](double t) { return dense_expm_oracle(m.sys.A, rho0, t); };
    o.mass = [g](const CVec& rho) { return discrete_mass(g, rho); };
    for (int l = 0; l < g.d; ++l) o.extra_names.push_back("q" + std::to_string(l + 1));
    o.extra = [g](double, const CVec& rho) { return moment_recover(g, rho); };
    const json& Fj = p.at("F");
    if (Fj.at("fn") == "linear") {
        double k = Fj.at("coef").get<double>();
        o.moment_error = [g, q0, k](double t, const CVec& rho) {
            auto q = moment_recover(g, rho);
            double e = 0.0;
            for (int l = 0; l < g.d; ++l) e = std::max(e, std::abs(q[l] - q0[l] * std::exp(k * t)));
            return e;
        };
    }
    return o;
}

long long pick_mode(const Grid& g, const CVec& u) {
    auto [amps, speeds] = heat_mode_scan(g, u);
    double amax = amps.maxCoeff();
    long long best = -1;
    for (long long i = 0; i < amps.size(); ++i) {
        if (!(amps[i] > 1e-8 * amax)) continue;
        if (best < 0 || speeds[i] > speeds[best] || (speeds[i] == speeds[best] && amps[i] > amps[best])) best = i;
    }
    return std::max(best, 0LL);
}

std::string snapshot_csv(const Snapshot& s, const std::optional<Grid>& g, int ordinates) {
    std::ostringstream os;
    const long long n = s.u.size();
    if (ordinates > 0) {
        os << "k,";
        coord_header(os, g->d);
    } else if (g) {
        coord_header(os, g->d);
    } else {
        os << "index";
    }
    os << ",re,im,abs\n";
    const long long nx = g ? g->size() : n;
    for (long long i = 0; i < n; ++i) {
        if (ordinates > 0) {
            os << i / nx << ',';
            coord_row(os, *g, i % nx);
        } else if (g) {
            coord_row(os, *g, i);
        } else {
            os << i;
        }
        os << ',' << format_double(s.u[i].real()) << ',' << format_double(s.u[i].imag()) << ','
           << format_double(std::abs(s.u[i])) << '\n';
    }
    return os.str();
}

std::string indexed(const char* stem, std::size_t k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03zu.csv", stem, k);
    return buf;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir_override) {
    RunResult res;
    const auto t_start = std::chrono::steady_clock::now();
    std::string out_dir = out_dir_override.empty() ? cfg.out_dir : out_dir_override;
    if (out_dir.empty()) {
        res.exit_code = 2;
        res.message = "no output directory: set out_dir in the config or pass --out";
        return res;
    }
    Outcome o;
    try {
        switch (cfg.kind) {
            case ModelKind::Heat: o = run_heat(cfg); break;
            case ModelKind::Convection: o = run_convection(cfg); break;
            case ModelKind::BlackScholes: o = run_black_scholes(cfg); break;
            case ModelKind::FokkerPlanck: o = run_fokker_planck(cfg); break;
            case ModelKind::Boltzmann: o = run_boltzmann(cfg); break;
            case ModelKind::Liouville: o = run_liouville(cfg); break;
            case ModelKind::LinearODE: o = run_linear_ode(cfg); break;
        }
    } catch (const CflError& e) {
        res.exit_code = 2;
        res.message = e.what();
        return res;
    } catch (const SchemaError& e) {
        res.exit_code = 2;
        res.message = e.what();
        return res;
    } catch (const std::exception& e) {
        res.exit_code = 1;
        res.message = e.what();
        return res;
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        res.exit_code = 1;
        res.message = "cannot create '" + out_dir + "': " + ec.message();
        return res;
    }
    auto put = [&](const std::string& name, const std::string& content) {
        write_atomic((fs::path(out_dir) / name).string(), content);
        res.files.push_back(name);
    };

    long long l_star = -1;
    if (cfg.profile && cfg.profile->axis == ProfileSpec::Axis::PAtMode) {
        l_star = cfg.profile->l_star ? *cfg.profile->l_star : pick_mode(*cfg.grid, o.mode_source);
        o.resolved["l_star"] = l_star;
    }
    double profile_p = 0.0;
    if (cfg.profile && cfg.profile->axis == ProfileSpec::Axis::XAtP) {
        if (cfg.profile->p_star)
            profile_p = *cfg.profile->p_star;
        else if (o.resolved.contains("p_star"))
            profile_p = o.resolved["p_star"].get<double>();
        else if (!o.snaps.empty() && o.snaps.front().w)
            profile_p = default_p_star(o.snaps.front().w->pgrid);
        o.resolved["profile_p"] = profile_p;
    }

    const bool has_exact = cfg.diag_error && (o.exact || o.moment_error);
    std::ostringstream diag;
    diag << "time";
    if (cfg.diag_norm) diag << ",norm";
    if (cfg.diag_mass && o.mass) diag << ",mass";
    if (has_exact) diag << ",error";
    if (l_star >= 0) diag << ",containment";
    for (const auto& nm : o.extra_names) diag << ',' << nm;
    diag << '\n';

    try {
        for (std::size_t k = 0; k < o.snaps.size(); ++k) {
            const Snapshot& s = o.snaps[k];
            put(indexed("snapshot", k), snapshot_csv(s, cfg.grid, o.ordinates));
            diag << format_double(s.t);
            if (cfg.diag_norm) diag << ',' << format_double(s.w ? s.w->values.norm() : s.u.norm());
            if (cfg.diag_mass && o.mass) diag << ',' << format_double(o.mass(s.u));
            if (has_exact) {
                double err;
                if (o.moment_error) {
                    err = o.moment_error(s.t, s.u);
                } else {
                    CVec ex = o.exact(s.t);
                    double den = ex.norm();
                    err = den > 0.0 ? (s.u - ex).norm() / den : (s.u - ex).norm();
                }
                diag << ',' << format_double(err);
            }
            if (cfg.profile && s.w) {
                if (l_star >= 0) {
                    std::string prof = emit_profile(*s.w, ProfileSpec::Axis::PAtMode, double(l_star));
                    put(indexed("profile", k), prof);
                    CVec c = x_spectral(*s.w);
                    diag << ',' << format_double(containment_fraction(c.segment(l_star * s.w->pgrid.N, s.w->pgrid.N)));
                } else {
                    put(indexed("profile", k), emit_profile(*s.w, ProfileSpec::Axis::XAtP, profile_p));
                }
            }
            if (o.extra)
                for (double v : o.extra(s.t, s.u)) diag << ',' << format_double(v);
            diag << '\n';
        }
        put("diagnostics.csv", diag.str());
    } catch (const SchroError& e) {
        res.exit_code = 2;
        res.message = e.what();
        return res;
    }

    if (o.blew_up) {
        res.exit_code = 3;
        res.message = "blow-up: ||w|| exceeded " + format_double(cfg.plan.blowup_factor) + " ||w0|| at t = " +
                      format_double(o.blowup_time);
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    json manifest = {
        {"manifest_version", 1},
        {"config", cfg.source},
        {"engine", engine_name(cfg.plan.engine)},
        {"model", model_kind_name(cfg.kind)},
        {"seed", cfg.seed},
        {"status", o.blew_up ? "blowup" : "ok"},
        {"exit_code", res.exit_code},
        {"wall_time_s", wall},
        {"resolved", o.resolved},
    };
    json times = json::array();
    for (const auto& s : o.snaps) times.push_back(s.t);
    manifest["snapshot_times"] = times;
    std::vector<std::string> listed = res.files;
    listed.push_back("manifest.json");
    manifest["files"] = listed;
    try {
        put("manifest.json", manifest.dump(2) + "\n");
    } catch (const SchroError& e) {
        res.exit_code = 1;
        res.message = e.what();
    }
    return res;
}

}  // namespace schro
