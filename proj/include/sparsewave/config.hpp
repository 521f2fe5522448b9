#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsewave/greens.hpp"
#include "sparsewave/potential.hpp"
#include "sparsewave/radial.hpp"

namespace spw {

// Everything a run needs, loadable from a versioned JSON document. Optional
// sections fall back to the defaults below so minimal configs stay small.
struct ExperimentConfig {
    int schema_version = 1;

    SparsePotential potential;
    std::vector<double> log_radii;  // validate-only: radii given as ln R_n

    SourceSpec source;

    std::vector<double> tau{1.0};  // Re k values
    std::vector<double> eps{0.3};  // Im k values
    int grid_degree = 12;

    int born_order = 2;
    int order_cap = 8;
    double tolerance = 1e-10;
    double alpha = 1.5;  // gap schedule R_{n+1} > e^{alpha R_n} for validate

    double tri_a = 0.5, tri_b = 2.0, tri_gamma1 = 10.0;
    int entropy_n_max = 3;
    double measure_h = 0.0;  // 0 = (b - a)/400

    std::vector<double> eig_E{1.0};
    std::vector<double> eig_gamma{1.0};
    GapSchedule schedule;

    int trials = 1000;
    std::uint64_t seed = 1;

    double eta_C = 1.0, eta_d = 2.0, envelope_C = 1.0;

    int par_m_max = 8;
    double par_t_min = 100.0, par_t_max = 10000.0;
    int par_nt = 25;

    std::string output_dir = "out";
};

// Throws InvalidInput with "path:line: message" on parse or schema errors.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& path_for_errors);

// Lossless echo of the config (parse_config(config_to_json(c)) reproduces c).
std::string config_to_json(const ExperimentConfig& config);

// %.17g rendering shared by every CSV column
std::string g17(double v);

struct CsvFile {
    explicit CsvFile(const std::string& path, const std::vector<std::string>& columns);
    ~CsvFile();
    void row(const std::vector<std::string>& cells);
    CsvFile(const CsvFile&) = delete;
    CsvFile& operator=(const CsvFile&) = delete;

  private:
    void* stream;  // FILE*
    std::size_t n_cols;
};

// config echo + versions + wall time, written next to the CSVs
void write_metadata(const std::string& path, const ExperimentConfig& config,
                    const std::string& subcommand, double wall_seconds);

}  // namespace spw
