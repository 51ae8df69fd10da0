#include "ginspectra/spectrum_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace ginspectra {

namespace {

[[noreturn]] void fail_at(const std::filesystem::path& file, std::int64_t row,
                          const std::string& what) {
    throw ValidationError(file.string() + ":" + std::to_string(row) + ": " +
                          what);
}

std::uint64_t parse_u64(const std::string& text) {
    std::uint64_t v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    const auto [p, ec] = std::from_chars(b, e, v, 10);
    if (ec != std::errc() || p != e)
        throw ValidationError("malformed unsigned integer '" + text + "'");
    return v;
}

// "name=value;name=value" with 17-digit values; a site-resolved parameter
// writes its per-site values ':'-joined, e.g. "lambda=0.5:-1.25:2".
std::string join_params(
    const std::vector<std::pair<std::string, std::vector<double>>>& params) {
    std::string out;
    for (const auto& [name, values] : params) {
        if (!out.empty()) out += ';';
        out += name;
        out += '=';
        bool first = true;
        for (double v : values) {
            if (!first) out += ':';
            out += format_g17(v);
            first = false;
        }
    }
    return out;
}

std::vector<double> split_values(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(':', pos);
        if (end == std::string::npos) end = text.size();
        out.push_back(parse_double(text.substr(pos, end - pos)));
        pos = end + 1;
    }
    return out;
}

std::vector<std::pair<std::string, std::vector<double>>> split_params(
    const std::string& text) {
    std::vector<std::pair<std::string, std::vector<double>>> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(pos, end - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ValidationError("malformed parameter item '" + item + "'");
        out.emplace_back(item.substr(0, eq),
                         split_values(item.substr(eq + 1)));
        pos = end + 1;
    }
    return out;
}

}  // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& text) {
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    const auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        throw ValidationError("malformed number '" + text + "'");
    return v;
}

void write_spectrum(const std::filesystem::path& file, const Spectrum& s) {
    std::ofstream out(file);
    if (!out)
        throw ValidationError("cannot open '" + file.string() +
                              "' for writing");
    if (s.provenance) {
        out << "# model=" << s.provenance->model << "\n";
        out << "# seed=" << s.provenance->seed << "\n";
        out << "# params=" << join_params(s.provenance->params) << "\n";
        out << "# residual=" << format_g17(s.residual_bound) << "\n";
    }
    out << "re,im\n";
    for (const Complex& v : s.eigenvalues)
        out << format_g17(v.real()) << ',' << format_g17(v.imag()) << "\n";
    if (!out)
        throw ValidationError("write failed for '" + file.string() + "'");
}

Spectrum read_spectrum(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open '" + file.string() + "'");
    Spectrum s;
    SpectrumProvenance prov;
    bool have_prov = false;
    bool have_columns = false;
    std::string line;
    std::int64_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            if (!body.empty() && body.front() == ' ') body.erase(0, 1);
            const std::size_t eq = body.find('=');
            if (eq == std::string::npos)
                fail_at(file, row, "malformed header line '" + line + "'");
            const std::string key = body.substr(0, eq);
            const std::string value = body.substr(eq + 1);
            if (key == "model") {
                prov.model = value;
                have_prov = true;
            } else if (key == "seed") {
                prov.seed = parse_u64(value);
                have_prov = true;
            } else if (key == "params") {
                if (!value.empty()) prov.params = split_params(value);
                have_prov = true;
            } else if (key == "residual") {
                s.residual_bound = parse_double(value);
            } else {
                fail_at(file, row, "unknown header key '" + key + "'");
            }
            continue;
        }
        if (!have_columns) {
            if (line != "re,im")
                fail_at(file, row, "expected column header 're,im', got '" +
                                       line + "'");
            have_columns = true;
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            fail_at(file, row, "malformed eigenvalue row '" + line + "'");
        try {
            s.eigenvalues.emplace_back(parse_double(line.substr(0, comma)),
                                       parse_double(line.substr(comma + 1)));
        } catch (const ValidationError& e) {
            fail_at(file, row, e.what());
        }
    }
    if (!have_columns)
        throw ValidationError(file.string() + ": missing 're,im' header");
    if (s.eigenvalues.empty())
        throw ValidationError(file.string() + ": no eigenvalues");
    if (have_prov) s.provenance = std::move(prov);
    s.certified = s.residual_bound <= kCertificationThreshold;
    return s;
}

std::string to_string(ReferenceChoice r) {
    switch (r) {
        case ReferenceChoice::None: return "none";
        case ReferenceChoice::Poisson: return "poisson";
        case ReferenceChoice::Ginue: return "ginue";
        case ReferenceChoice::Both: return "both";
    }
    return "?";
}

ReferenceChoice reference_from_string(const std::string& name) {
    if (name == "none") return ReferenceChoice::None;
    if (name == "poisson") return ReferenceChoice::Poisson;
    if (name == "ginue") return ReferenceChoice::Ginue;
    if (name == "both") return ReferenceChoice::Both;
    throw ValidationError("unknown reference choice '" + name +
                          "' (expected none|poisson|ginue|both)");
}

void write_marginal_csv(const std::filesystem::path& file,
                        const Histogram1D& h, ReferenceChoice ref,
                        const Histogram1D* poisson, const Histogram1D* ginue) {
    const bool want_poisson =
        ref == ReferenceChoice::Poisson || ref == ReferenceChoice::Both;
    const bool want_ginue =
        ref == ReferenceChoice::Ginue || ref == ReferenceChoice::Both;
    if ((want_poisson && poisson == nullptr) ||
        (want_ginue && ginue == nullptr))
        throw ValidationError("reference curve missing for marginal CSV");
    std::ofstream out(file);
    if (!out)
        throw ValidationError("cannot open '" + file.string() +
                              "' for writing");
    out << "bin_lo,bin_hi,density";
    if (want_poisson) out << ",reference_poisson";
    if (want_ginue) out << ",reference_ginue";
    out << "\n";
    for (int i = 0; i < h.bins(); ++i) {
        out << format_g17(h.bin_lo(i)) << ',' << format_g17(h.bin_hi(i))
            << ',' << format_g17(h.density[i]);
        if (want_poisson) out << ',' << format_g17(poisson->density[i]);
        if (want_ginue) out << ',' << format_g17(ginue->density[i]);
        out << "\n";
    }
    if (!out)
        throw ValidationError("write failed for '" + file.string() + "'");
}

void write_density2d_csv(const std::filesystem::path& file,
                         const Histogram2D& h) {
    std::ofstream out(file);
    if (!out)
        throw ValidationError("cannot open '" + file.string() +
                              "' for writing");
    out << "x_lo,x_hi,y_lo,y_hi,density\n";
    const double w = h.cell_width();
    for (int iy = 0; iy < h.grid; ++iy)
        for (int ix = 0; ix < h.grid; ++ix) {
            const double xl = h.x_lo(ix);
            const double yl = h.y_lo(iy);
            out << format_g17(xl) << ',' << format_g17(xl + w) << ','
                << format_g17(yl) << ',' << format_g17(yl + w) << ','
                << format_g17(
                       h.density[static_cast<std::size_t>(iy) * h.grid + ix])
                << "\n";
        }
    if (!out)
        throw ValidationError("write failed for '" + file.string() + "'");
}

}  // namespace ginspectra
