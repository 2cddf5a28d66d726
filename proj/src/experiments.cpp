#include "stmg/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "stmg/denselin.hpp"
#include "stmg/multigrid.hpp"
#include "stmg/parallel.hpp"
#include "stmg/spacetime_system.hpp"
#include "stmg/version.hpp"

namespace stmg {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_u64(uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

std::string ExperimentConfig::serialize() const {
    std::map<std::string, std::string> kv;
    kv["study"] = study;
    kv["dim"] = std::to_string(dim);
    kv["p_space"] = std::to_string(p_space);
    kv["p_time"] = std::to_string(p_time);
    kv["theta"] = format_double(theta);
    kv["slab_length"] = format_double(slab_length);
    kv["n_slabs"] = std::to_string(n_slabs);
    kv["n_el_space"] = std::to_string(n_el_space);
    kv["n_el_time"] = std::to_string(n_el_time);
    kv["tol"] = format_double(tol);
    kv["inner_tol"] = format_double(inner_tol);
    kv["coarse_cap"] = std::to_string(coarse_cap);
    kv["strategy"] = strategy;
    kv["p_override"] = std::to_string(p_override);
    kv["theta_override"] = format_double(theta_override);
    kv["out"] = out;
    kv["jobs"] = std::to_string(jobs);
    kv["seed"] = format_u64(seed);
    kv["dump_matrices_dir"] = dump_matrices_dir;
    std::string s;
    for (const auto& [k, v] : kv) s += k + " = " + v + "\n";
    return s;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    try {
        if (key == "study") study = value;
        else if (key == "dim") dim = std::stoi(value);
        else if (key == "p_space") p_space = std::stoi(value);
        else if (key == "p_time") p_time = std::stoi(value);
        else if (key == "theta") theta = std::stod(value);
        else if (key == "slab_length") slab_length = std::stod(value);
        else if (key == "n_slabs") n_slabs = std::stoi(value);
        else if (key == "n_el_space") n_el_space = std::stoi(value);
        else if (key == "n_el_time") n_el_time = std::stoi(value);
        else if (key == "tol") tol = std::stod(value);
        else if (key == "inner_tol") inner_tol = std::stod(value);
        else if (key == "coarse_cap") coarse_cap = std::stol(value);
        else if (key == "strategy") strategy = value;
        else if (key == "p_override") p_override = std::stoi(value);
        else if (key == "theta_override") theta_override = std::stod(value);
        else if (key == "out") out = value;
        else if (key == "jobs") jobs = std::stoi(value);
        else if (key == "seed") seed = std::stoull(value);
        else if (key == "dump_matrices_dir") dump_matrices_dir = value;
        else throw ParameterError("ExperimentConfig: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
        throw ParameterError("ExperimentConfig: bad value for '" + key + "': " + value);
    }
}

ExperimentConfig ExperimentConfig::parse(std::istream& in, ExperimentConfig base) {
    std::string line;
    while (std::getline(in, line)) {
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) base.set(key, value);
    }
    return base;
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) { return parse(in, ExperimentConfig{}); }

ExperimentConfig ExperimentConfig::load(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("ExperimentConfig: cannot open " + path);
    return parse(in, std::move(base));
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    return load(path, ExperimentConfig{});
}

uint64_t ExperimentConfig::hash() const {
    const std::string s = serialize();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ExperimentConfig ExperimentConfig::defaults_for(const std::string& study) {
    ExperimentConfig cfg;
    cfg.study = study;
    if (study == "condx") {
        cfg.theta = 0.01;
        cfg.slab_length = 0.1;
        cfg.out = "condx.csv";
    } else if (study == "mineig") {
        cfg.out = "mineig.csv";
    } else if (study == "minres") {
        cfg.theta = 0.1;
        cfg.dim = 2;
        cfg.slab_length = 0.1;
        cfg.tol = 1e-10;
        cfg.out = "minres.csv";
    } else if (study == "mg") {
        cfg.dim = 1;
        cfg.p_space = cfg.p_time = 3;
        cfg.theta = 0.01;
        cfg.slab_length = 0.1;
        cfg.n_el_time = 8;
        cfg.tol = 1e-8;
        cfg.inner_tol = 1e-4;
        cfg.coarse_cap = 256;
        cfg.out = "mg.csv";
    } else if (study == "convergence") {
        cfg.dim = 1;
        cfg.theta = 0.01;
        cfg.n_slabs = 2;
        cfg.slab_length = 0.5;
        cfg.out = "convergence.csv";
    } else {
        throw ParameterError("unknown study: " + study);
    }
    return cfg;
}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw DimensionError("ResultTable: column count mismatch");
    rows_.push_back(std::move(row));
}

int ResultTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == name) return static_cast<int>(i);
    throw ParameterError("ResultTable: no column '" + name + "'");
}

const ResultTable::Cell& ResultTable::at(int row, const std::string& column) const {
    return rows_[row][column_index(column)];
}

double ResultTable::as_double(const Cell& c) {
    if (std::holds_alternative<double>(c)) return std::get<double>(c);
    if (std::holds_alternative<int64_t>(c)) return static_cast<double>(std::get<int64_t>(c));
    throw ParameterError("ResultTable: cell is not numeric");
}

bool operator==(const ResultTable::Cell& a, const ResultTable::Cell& b) {
    return a.index() == b.index() &&
           std::visit([&](const auto& va) {
               using T = std::decay_t<decltype(va)>;
               return va == std::get<T>(b);
           }, a);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

ResultTable::Cell parse_cell(const std::string& s) {
    if (!s.empty() && s.find_first_not_of("-0123456789") == std::string::npos) {
        try {
            size_t pos = 0;
            const long long v = std::stoll(s, &pos);
            if (pos == s.size()) return ResultTable::Cell(static_cast<int64_t>(v));
        } catch (...) {
        }
    }
    if (!s.empty()) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end && *end == '\0' && end != s.c_str()) return ResultTable::Cell(v);
    }
    return ResultTable::Cell(s);
}

} // namespace

void ResultTable::to_csv(std::ostream& out) const {
    for (size_t i = 0; i < columns_.size(); ++i)
        out << (i ? "," : "") << csv_escape(columns_[i]);
    out << "\n";
    for (const auto& row : rows_) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) out << format_double(v);
                    else if constexpr (std::is_same_v<T, int64_t>) out << v;
                    else out << csv_escape(v);
                },
                row[i]);
        }
        out << "\n";
    }
}

ResultTable ResultTable::from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("ResultTable::from_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ResultTable table(csv_split(line));
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = csv_split(line);
        std::vector<Cell> row;
        row.reserve(cells.size());
        for (const std::string& c : cells) row.push_back(parse_cell(c));
        table.add_row(std::move(row));
    }
    return table;
}

namespace {

void common_meta(ResultTable& table, const ExperimentConfig& cfg) {
    table.meta()["config"] = cfg.serialize();
    table.meta()["seed"] = format_u64(cfg.seed);
    table.meta()["version"] = kVersion;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(cfg.hash()));
    table.meta()["config_hash"] = buf;
}

std::vector<int> degree_grid(const ExperimentConfig& cfg, int lo, int hi) {
    if (cfg.p_override > 0) return {cfg.p_override};
    std::vector<int> g;
    for (int p = lo; p <= hi; ++p) g.push_back(p);
    return g;
}

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
    uint64_t h = seed ^ 0x9e3779b97f4a7c15ull;
    for (uint64_t v : {a, b, c}) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xbf58476d1ce4e5b9ull;
    }
    return h;
}

} // namespace

ResultTable run_condx(const ExperimentConfig& cfg) {
    const std::vector<int> ps = degree_grid(cfg, 2, 8);
    const std::vector<int> nels = {2, 4, 8, 16, 32, 64, 128};
    ResultTable table({"p", "nt_minus_p", "cond_x", "status"});
    struct Row { int p, nel; double cond; std::string status; };
    std::vector<Row> rows(ps.size() * nels.size());
    parallel_for(static_cast<int>(rows.size()), cfg.jobs, [&](int idx) {
        const int p = ps[idx / nels.size()];
        const int nel = nels[idx % nels.size()];
        Row& r = rows[idx];
        r.p = p;
        r.nel = nel;
        try {
            const SplineBasis basis = SplineBasis::make_uniform(p, nel, 0.0, cfg.slab_length);
            const TimeMatrices tm = assemble_time(basis, cfg.theta);
            const GeneralizedEig ge = generalized_eig(tm.K_t, tm.M_t);
            r.cond = cond_2norm(ge.x.real_embedding());
            r.status = "ok";
        } catch (const Error& e) {
            r.cond = std::nan("");
            r.status = std::string("error: ") + e.what();
        }
    });
    for (const Row& r : rows)
        table.add_row({int64_t(r.p), int64_t(r.nel), r.cond, r.status});

    // Monotone growth along both axes (recorded; the acceptance suite asserts).
    bool monotone = true;
    auto cond_at = [&](int pi, int ni) { return rows[pi * nels.size() + ni].cond; };
    for (size_t pi = 0; pi < ps.size(); ++pi)
        for (size_t ni = 0; ni + 1 < nels.size(); ++ni)
            if (!(cond_at(pi, ni) < cond_at(pi, ni + 1))) monotone = false;
    for (size_t ni = 0; ni < nels.size(); ++ni)
        for (size_t pi = 0; pi + 1 < ps.size(); ++pi)
            if (!(cond_at(pi, ni) < cond_at(pi + 1, ni))) monotone = false;
    table.meta()["monotone"] = monotone ? "true" : "false";
    common_meta(table, cfg);
    return table;
}

ResultTable run_mineig(const ExperimentConfig& cfg) {
    std::vector<double> thetas = {0.0, 0.01, 0.1, 1.0, 10.0};
    if (cfg.theta_override >= 0.0) thetas = {cfg.theta_override};
    const std::vector<int> ps = degree_grid(cfg, 1, 7);
    const std::vector<int> refs = {2, 4, 6, 8};
    ResultTable table({"theta", "p", "refinement", "star", "min_re", "status"});
    struct Row { double theta; int p, ref, star; double min_re; std::string status; };
    std::vector<Row> rows(thetas.size() * ps.size() * refs.size());
    parallel_for(static_cast<int>(rows.size()), cfg.jobs, [&](int idx) {
        const int nref = static_cast<int>(refs.size());
        const int np = static_cast<int>(ps.size());
        const double theta = thetas[idx / (np * nref)];
        const int p = ps[(idx / nref) % np];
        const int ref = refs[idx % nref];
        Row& r = rows[idx];
        r.theta = theta;
        r.p = p;
        r.ref = ref;
        r.star = 0;
        r.min_re = std::nan("");
        try {
            const SplineBasis basis = SplineBasis::make_uniform(p, 1 << ref, 0.0, 1.0);
            const TimeMatrices tm = assemble_time(basis, theta);
            double mt_min_re = std::numeric_limits<double>::infinity();
            for (const Cplx& l : eigenvalues(tm.M_t)) mt_min_re = std::min(mt_min_re, l.re);
            if (mt_min_re < 0.0) {
                r.star = 1;
            } else {
                const GeneralizedEig ge = generalized_eig(tm.K_t, tm.M_t);
                r.min_re = ge.min_real_part().re;
            }
            r.status = "ok";
        } catch (const Error& e) {
            r.status = std::string("error: ") + e.what();
        }
    });
    for (const Row& r : rows) {
        ResultTable::Cell val = r.star ? ResultTable::Cell(std::string("*"))
                                       : ResultTable::Cell(r.min_re);
        table.add_row({r.theta, int64_t(r.p), int64_t(r.ref), int64_t(r.star), std::move(val),
                       r.status});
    }
    common_meta(table, cfg);
    return table;
}

ResultTable run_minres(const ExperimentConfig& cfg) {
    const std::vector<int> ps = degree_grid(cfg, 2, 6);
    const std::vector<int> refs = {0, 1, 2, 3, 4};
    const std::vector<std::string> variants = {"cschur", "rschur"};
    ResultTable table({"p", "refinement", "variant", "max_iterations", "n_systems", "status"});
    struct Row { int p, ref; std::string variant; int max_it = 0, n_sys = 0; std::string status = "ok"; };
    std::vector<Row> rows(ps.size() * refs.size() * variants.size());
    parallel_for(static_cast<int>(rows.size()), cfg.jobs, [&](int idx) {
        const int nv = static_cast<int>(variants.size());
        const int nr = static_cast<int>(refs.size());
        const int p = ps[idx / (nr * nv)];
        const int ref = refs[(idx / nv) % nr];
        const std::string& variant = variants[idx % nv];
        Row& r = rows[idx];
        r.p = p;
        r.ref = ref;
        r.variant = variant;
        try {
            const int nel_t = 2 << ref;
            const SplineBasis tbasis = SplineBasis::make_uniform(p, nel_t, 0.0, cfg.slab_length);
            const TimeMatrices tm = assemble_time(tbasis, cfg.theta);

            const int nel_x = 2 << ref;
            std::vector<int> nel(cfg.dim, nel_x);
            std::vector<double> lo(cfg.dim, 0.0), hi(cfg.dim, 1.0);
            const TensorBasis space = make_box_basis(p, nel, lo, hi);
            SpaceMatrices sm = assemble_space(space);
            auto mass = std::make_shared<const SparseMatrix>(std::move(sm.mass));
            auto stiff = std::make_shared<const SparseMatrix>(std::move(sm.stiffness));

            // Collect the per-system (alpha, beta1, beta2) parameters of the
            // chosen variant.
            std::vector<std::array<double, 3>> systems;
            if (variant == "cschur") {
                const GeneralizedEig ge = generalized_eig(tm.K_t, tm.M_t);
                for (const EigenPair& ep : ge.pairs) {
                    if (ep.lambda.im < 0.0) continue; // conjugate of an earlier system
                    systems.push_back({ep.lambda.re, ep.lambda.im, ep.lambda.im});
                }
            } else {
                const TimeDecomposition td =
                    decompose_time(tm.K_t, tm.M_t, TimeDecomposition::Kind::RealSchur);
                for (const SchurBlock& b : td.blocks) {
                    if (b.size == 1)
                        systems.push_back({td.tr(b.start, b.start), 0.0, 0.0});
                    else
                        systems.push_back({td.tr(b.start, b.start), td.tr(b.start, b.start + 1),
                                           td.tr(b.start + 1, b.start)});
                }
            }
            const PrecVariant pv =
                (variant == "cschur") ? PrecVariant::diag_thm2 : PrecVariant::rschur_thm3;
            int sys_idx = 0;
            for (const auto& [alpha, b1, b2] : systems) {
                const BlockSaddleOperator op = make_block_saddle(stiff, mass, alpha, b1, b2);
                const BlockDiagPreconditioner prec = make_preconditioner(op, pv);
                std::mt19937_64 rng(mix_seed(cfg.seed, p, ref * 2 + (variant == "rschur"), sys_idx));
                std::uniform_real_distribution<double> dist(-1.0, 1.0);
                Vector rhs(2 * op.n());
                for (double& v : rhs) v = dist(rng);
                auto [sol, rep] = minres_block_solve(op, prec, rhs, cfg.tol);
                r.max_it = std::max(r.max_it, rep.iterations);
                ++r.n_sys;
                ++sys_idx;
            }
        } catch (const Error& e) {
            r.status = std::string("error: ") + e.what();
        }
    });
    for (Row& r : rows)
        table.add_row({int64_t(r.p), int64_t(r.ref), r.variant, int64_t(r.max_it),
                       int64_t(r.n_sys), r.status});
    common_meta(table, cfg);
    return table;
}

ResultTable run_mg(const ExperimentConfig& cfg) {
    std::vector<std::string> strategies;
    if (cfg.strategy == "all") strategies = {"direct", "diag", "cschur", "rschur"};
    else strategies = {cfg.strategy};
    ResultTable table({"strategy", "row", "slabs", "n_el_space", "dofs", "levels", "iterations",
                       "converged", "setup_seconds", "solve_seconds", "status"});
    const ManufacturedSolution exact = smooth_decay_solution(cfg.dim);
    for (const std::string& strategy : strategies) {
        for (int row = 0; row < 3; ++row) {
            const int slabs = 2 << row;
            const int nel_x = 16 << row;
            std::string status = "ok";
            int64_t dofs = 0, levels = 0, iterations = 0, converged = 0;
            double setup_s = 0.0, solve_s = 0.0;
            try {
                SpaceTimeConfig sc;
                sc.dim = cfg.dim;
                sc.p_space = cfg.p_space;
                sc.p_time = cfg.p_time;
                sc.n_el_space = nel_x;
                sc.n_el_time = cfg.n_el_time;
                sc.n_slabs = slabs;
                sc.theta = cfg.theta;
                sc.slab_length = cfg.slab_length;
                MgOptions opt;
                opt.smoother.strategy = strategy_from_name(strategy);
                opt.smoother.inner_tol = cfg.inner_tol;
                opt.coarse_dof_cap = cfg.coarse_cap;
                opt.jobs = cfg.jobs;
                const MGHierarchy hier = MGHierarchy::build(sc, opt);
                setup_s = hier.setup_seconds();
                dofs = hier.system(0).total_dofs();
                levels = hier.num_levels();
                const Field f = hier.system(0).assemble_rhs(exact.rhs, exact.initial);
                Field u;
                const auto t0 = std::chrono::steady_clock::now();
                const MGHierarchy::Report rep = hier.solve(u, f, cfg.tol, 50);
                solve_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                iterations = rep.iterations;
                converged = rep.converged ? 1 : 0;
            } catch (const Error& e) {
                status = std::string("error: ") + e.what();
            }
            table.add_row({strategy, int64_t(row), int64_t(slabs), int64_t(nel_x), dofs, levels,
                           iterations, converged, setup_s, solve_s, status});
        }
    }
    common_meta(table, cfg);
    return table;
}

ResultTable run_convergence(const ExperimentConfig& cfg) {
    std::vector<int> ps = (cfg.p_override > 0) ? std::vector<int>{cfg.p_override}
                                               : std::vector<int>{2, 3};
    const int n_levels = 4;
    ResultTable table({"p", "level", "n_elements", "dofs", "dg_error", "observed_order"});
    for (int p : ps) {
        double prev_err = 0.0;
        for (int level = 0; level < n_levels; ++level) {
            const int nel = 4 << level;
            SpaceTimeConfig sc;
            sc.dim = cfg.dim;
            sc.p_space = sc.p_time = p;
            sc.n_el_space = nel;
            sc.n_el_time = nel;
            sc.n_slabs = cfg.n_slabs;
            sc.theta = cfg.theta;
            sc.slab_length = cfg.slab_length;
            const SpaceTimeSystem sys = SpaceTimeSystem::build(sc);
            const ManufacturedSolution exact = smooth_decay_solution(cfg.dim);
            const Field f = sys.assemble_rhs(exact.rhs, exact.initial);
            const SequentialSolver solver(sys);
            const Field u = solver.solve(f);
            const double err = dg_error(sys, u, exact);
            ResultTable::Cell order = std::string("");
            if (level > 0) order = std::log2(prev_err / err);
            table.add_row({int64_t(p), int64_t(level), int64_t(nel), int64_t(sys.total_dofs()),
                           err, std::move(order)});
            prev_err = err;
            if (level == 0 && !cfg.dump_matrices_dir.empty()) {
                const SlabOperator& op = sys.slab(0).op;
                op.M_x->write_matrix_market(cfg.dump_matrices_dir + "/mass_x.mtx");
                op.K_x->write_matrix_market(cfg.dump_matrices_dir + "/stiffness_x.mtx");
                from_dense(op.K_t).write_matrix_market(cfg.dump_matrices_dir + "/k_t.mtx");
                from_dense(op.M_t).write_matrix_market(cfg.dump_matrices_dir + "/m_t.mtx");
            }
        }
    }
    common_meta(table, cfg);
    return table;
}

ResultTable run_study(const ExperimentConfig& cfg) {
    if (cfg.study == "condx") return run_condx(cfg);
    if (cfg.study == "mineig") return run_mineig(cfg);
    if (cfg.study == "minres") return run_minres(cfg);
    if (cfg.study == "mg") return run_mg(cfg);
    if (cfg.study == "convergence") return run_convergence(cfg);
    throw ParameterError("unknown study: " + cfg.study);
}

void write_results(const ResultTable& table, const ExperimentConfig& cfg) {
    std::ofstream out(cfg.out);
    if (!out) throw IoError("write_results: cannot open " + cfg.out);
    table.to_csv(out);
    if (!out) throw IoError("write_results: write failed for " + cfg.out);

    nlohmann::json meta;
    meta["version"] = kVersion;
    meta["seed"] = cfg.seed;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(cfg.hash()));
    meta["config_hash"] = buf;
    nlohmann::json jcfg;
    std::istringstream iss(cfg.serialize());
    std::string line;
    while (std::getline(iss, line)) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos) jcfg[line.substr(0, eq)] = line.substr(eq + 3);
    }
    meta["config"] = jcfg;
    for (const auto& [k, v] : table.meta())
        if (k != "config") meta["table"][k] = v;
    std::ofstream mout(cfg.out + ".meta.json");
    if (!mout) throw IoError("write_results: cannot open " + cfg.out + ".meta.json");
    mout << meta.dump(2) << "\n";
}

} // namespace stmg
