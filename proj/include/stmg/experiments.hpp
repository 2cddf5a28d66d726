#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "stmg/errors.hpp"

namespace stmg {

/// Flat key=value experiment configuration. Studies fill their own grid
/// defaults; a loaded file and then CLI flags override individual keys.
struct ExperimentConfig {
    std::string study = "mg";
    int dim = 1;
    int p_space = 3;
    int p_time = 3;
    double theta = 0.01;
    double slab_length = 0.1;
    int n_slabs = 2;
    int n_el_space = 8;
    int n_el_time = 8;
    double tol = 1e-8;
    double inner_tol = 1e-4;
    long coarse_cap = 5000;
    std::string strategy = "all"; // mg study: all | direct | diag | cschur | rschur
    int p_override = 0;           // grid studies: restrict to one degree (0 = full grid)
    double theta_override = -1.0; // mineig: restrict to one theta (-1 = full grid)
    std::string out = "results.csv";
    int jobs = 1;
    uint64_t seed = 20250810;
    std::string dump_matrices_dir; // convergence: MatrixMarket debug export

    std::string serialize() const;              // sorted key = value lines
    static ExperimentConfig parse(std::istream& in, ExperimentConfig base);
    static ExperimentConfig parse(std::istream& in);
    static ExperimentConfig load(const std::string& path, ExperimentConfig base);
    static ExperimentConfig load(const std::string& path);
    void set(const std::string& key, const std::string& value);
    uint64_t hash() const; // FNV-1a of the serialization

    static ExperimentConfig defaults_for(const std::string& study);
};

/// Typed result table with provenance metadata.
class ResultTable {
public:
    using Cell = std::variant<int64_t, double, std::string>;

    ResultTable() = default;
    explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    std::map<std::string, std::string>& meta() { return meta_; }
    const std::map<std::string, std::string>& meta() const { return meta_; }

    void add_row(std::vector<Cell> row);
    int column_index(const std::string& name) const;
    const Cell& at(int row, const std::string& column) const;
    static double as_double(const Cell& c);

    void to_csv(std::ostream& out) const;
    static ResultTable from_csv(std::istream& in);

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::map<std::string, std::string> meta_;
};

bool operator==(const ResultTable::Cell& a, const ResultTable::Cell& b);

/// Table 2 study: cond2(X) of the generalized eigenvector matrix over
/// p x (N_t - p).
ResultTable run_condx(const ExperimentConfig& cfg);

/// Table 3 study: smallest real part of the generalized eigenvalues, with
/// the "*" flag when M_t has an eigenvalue with negative real part.
ResultTable run_mineig(const ExperimentConfig& cfg);

/// Table 4 study: max MinRes iterations for the preconditioned saddle
/// systems of both Schur variants.
ResultTable run_minres(const ExperimentConfig& cfg);

/// Table 5 study: stand-alone MG iteration counts and timings per strategy.
ResultTable run_mg(const ExperimentConfig& cfg);

/// Convergence-order study in the dG norm for a smooth manufactured
/// solution.
ResultTable run_convergence(const ExperimentConfig& cfg);

ResultTable run_study(const ExperimentConfig& cfg);

/// CSV + <out>.meta.json sidecar.
void write_results(const ResultTable& table, const ExperimentConfig& cfg);

} // namespace stmg
