#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include "ginspectra/ensembles.hpp"
#include "ginspectra/spectrum_io.hpp"
#include "ginspectra/spin_ops.hpp"

namespace ginspectra {

struct BinSpec {
    int r = 50;
    int theta = 50;
    int grid = 101;
};

// One ensemble experiment. Parsed from a JSON file with keys
//   model, L, N, params, alpha, ensemble_size, master_seed, bins, outputs,
//   reference, workers
// Unknown keys are errors, as are keys that do not apply to the chosen
// model (L/params are spin-only; N/alpha are crossover-only).
struct ExperimentConfig {
    std::variant<SpinChainSpec, CrossoverSpec> target;
    std::int64_t ensemble_size = 0;
    std::uint64_t master_seed = 0;
    BinSpec bins;
    std::filesystem::path outputs;
    ReferenceChoice reference = ReferenceChoice::None;
    int workers = 0;  // 0 = auto (hardware concurrency)

    // Not part of the file schema: the table runner disables per-spectrum
    // CSVs for its throwaway output trees.
    bool persist_spectra = true;

    bool is_spin() const {
        return std::holds_alternative<SpinChainSpec>(target);
    }
    const SpinChainSpec& spin() const {
        return std::get<SpinChainSpec>(target);
    }
    const CrossoverSpec& crossover() const {
        return std::get<CrossoverSpec>(target);
    }
    std::string model_name() const;
    int matrix_dim() const;
};

// Parse + validate. Throws ValidationError with the offending key in the
// message.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::filesystem::path& file);

// FNV-1a over the statistics-relevant fields only — outputs and workers are
// execution details and must not change the hash (summary.json embeds it
// and byte-identical reruns across worker counts are part of the contract).
std::string config_hash(const ExperimentConfig& cfg);

// Default on-disk location for the GinUE reference cache; honors
// GINSPECTRA_CACHE_DIR, falls back to ~/.cache/ginspectra.
std::filesystem::path default_cache_dir();

}  // namespace ginspectra
