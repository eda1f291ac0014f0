#pragma once

#include "eqstates/maps.hpp"
#include "eqstates/potential.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqs {

/// A configuration error tied to one field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct ExperimentConfig {
    std::string map = "doubling";
    std::string potential = "zero";
    std::vector<double> sigma{0.9};
    std::vector<double> eps{1.0 / 32.0};
    int n_max = 12;
    int grid_size = 1024;
    std::vector<double> a{2.0};
    int K = 20;
    std::uint64_t seed = 1;
    int samples = 200;
    int segments = 3;
    int length_min = 5;
    int length_max = 20;
    int tau_cap = -1;
    std::string collection = "full";
    std::string lift = "projection";
    double lambda_s = 0.25;
    double r = 0.5;
    int depth = 12;
    std::string format = "csv";
    std::string output;
    unsigned workers = 0;

    /// Canonical JSON of every field that affects results.
    std::string canonical_json() const;
    std::uint64_t hash() const;
};

/// "doubling", "mp:<alpha>", "perturbed:<delta>", "tabulated:<k0>;<k1>;...".
MapSystem parse_map(const std::string& spec);

/// "zero", "constant:<c>", "geometric:<t>", "cosine:<amp>",
/// "tabulated:<C>:<alpha>:<v0>;<v1>;...".
Potential parse_potential(const std::string& spec, const MapSystem& map);

/// Overlays the keys of a JSON document on `base`. Unknown keys are errors.
ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base = {});

/// Throws ValidationError naming the offending field.
void validate(const std::string& subcommand, const ExperimentConfig& cfg);

extern const std::vector<std::string> subcommands;

/// Runs one validated subcommand, writing its report to `out`.
/// Returns 0, or 3 when `check` fails.
int run_subcommand(const std::string& subcommand, const ExperimentConfig& cfg, std::ostream& out);

/// Full command line entry point with exit codes 0/1/2/3.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace eqs
