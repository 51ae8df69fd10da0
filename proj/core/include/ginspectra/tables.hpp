#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ginspectra {

// One reference table row: a spin model at fixed couplings (the remaining
// couplings drawn N(0,1) per realization) with its reported signature pair.
struct TableRowSpec {
    std::string table;       // "I".."IV"
    std::string model;       // H1/H2/H3
    int length = 0;          // chain sites
    std::string varied;      // which coupling this row pins
    double value = 0.0;      // pinned value
    std::int64_t ensemble = 0;
    double ref_r = 0.0;           // reference ⟨r⟩
    double ref_neg_cos = 0.0;     // reference −⟨cos θ⟩
};

struct TableRowResult {
    TableRowSpec spec;
    bool ok = false;         // row computed without error
    bool pass = false;       // |Δ| within tolerance for both signatures
    std::string error;
    double got_r = 0.0;
    double got_neg_cos = 0.0;
    double dev_r = 0.0;
    double dev_neg_cos = 0.0;
    double tol_r = 0.0;
    double tol_neg_cos = 0.0;
};

struct TableReport {
    double scale = 1.0;
    std::vector<TableRowResult> rows;
    bool all_pass() const;
};

const std::vector<TableRowSpec>& table_row_specs();

// Recomputes every row at `scale` times the reference ensemble size
// (minimum 1 realization; tolerances widen by 1/√scale when scale < 1) and
// compares against the reference values. Rows run independently; a failed
// row is marked "error" and the rest continue. Row r uses master seed
// derive_stream_seed(base_seed, r).
TableReport reproduce_tables(double scale, std::uint64_t base_seed,
                             int workers);

// Fixed-width console table: per row, reference vs computed vs |Δ| vs
// tolerance and PASS/FAIL/ERROR.
void print_table_report(std::ostream& os, const TableReport& report);

// Machine-readable copy: table,model,L,coupling,value,ensemble,ref_r,got_r,...
void write_table_report_csv(const std::filesystem::path& file,
                            const TableReport& report);

}  // namespace ginspectra
