#include "lrdspec/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lrdspec/errors.hpp"

namespace lrdspec {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps line endings stable
    if (!out) throw ConfigError("io: cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string text_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("io: cannot create directory '" + dir + "': " + ec.message());
}

void write_frame(const std::string& path, const HermitianFrame& frame, TableFormat format) {
    auto out = open_out(path);
    if (format == TableFormat::csv) out << "row,col,re,im\n";
    for (int r = 0; r < frame.basis.L; ++r) {
        for (int c = 0; c < frame.basis.L; ++c) {
            const auto v = frame.entries(r, c);
            if (format == TableFormat::csv) {
                out << (r + 1) << ',' << (c + 1) << ',' << format_double(v.real()) << ','
                    << format_double(v.imag()) << '\n';
            } else {
                out << "{\"row\":" << (r + 1) << ",\"col\":" << (c + 1)
                    << ",\"re\":" << format_double(v.real())
                    << ",\"im\":" << format_double(v.imag()) << "}\n";
            }
        }
    }
}

void write_diagonal(const std::string& path, const DiagonalOperator& diag, TableFormat format) {
    auto out = open_out(path);
    if (format == TableFormat::csv) out << "index,value\n";
    for (int l = 0; l < diag.basis.L; ++l) {
        if (format == TableFormat::csv)
            out << (l + 1) << ',' << format_double(diag.values[l]) << '\n';
        else
            out << "{\"index\":" << (l + 1) << ",\"value\":" << format_double(diag.values[l])
                << "}\n";
    }
}

void write_sample_path(const std::string& path, const SamplePath& sample, TableFormat format) {
    {
        auto out = open_out(path);
        if (format == TableFormat::csv) out << "t,l,value\n";
        for (long t = 0; t < sample.T; ++t) {
            for (int l = 0; l < sample.basis.L; ++l) {
                if (format == TableFormat::csv)
                    out << (t + 1) << ',' << (l + 1) << ',' << format_double(sample.coeffs(t, l))
                        << '\n';
                else
                    out << "{\"t\":" << (t + 1) << ",\"l\":" << (l + 1)
                        << ",\"value\":" << format_double(sample.coeffs(t, l)) << "}\n";
            }
        }
    }
    json meta;
    meta["T"] = sample.T;
    meta["L"] = sample.basis.L;
    meta["method"] = sample.meta.method;
    meta["seed"] = sample.meta.seed;
    meta["theta_true"] = sample.meta.theta_true;
    auto out = open_out(path + ".meta.json");
    out << meta.dump(2) << '\n';
}

SamplePath read_sample_path(const std::string& path) {
    std::ifstream meta_in(path + ".meta.json");
    if (!meta_in) throw ConfigError("io: missing sample sidecar '" + path + ".meta.json'");
    json meta = json::parse(meta_in);
    const long T = meta.at("T").get<long>();
    const int L = meta.at("L").get<int>();
    SimMeta sim_meta;
    sim_meta.method = meta.at("method").get<std::string>();
    sim_meta.seed = meta.at("seed").get<std::uint64_t>();
    sim_meta.theta_true = meta.at("theta_true").get<std::vector<double>>();

    std::ifstream in(path);
    if (!in) throw ConfigError("io: cannot open sample file '" + path + "'");
    Eigen::MatrixXd coeffs(T, L);
    coeffs.setConstant(std::numeric_limits<double>::quiet_NaN());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("t,", 0) == 0) continue;
        long t;
        int l;
        double value;
        if (line[0] == '{') {
            const json row = json::parse(line);
            t = row.at("t").get<long>();
            l = row.at("l").get<int>();
            value = row.at("value").get<double>();
        } else {
            std::istringstream ss(line);
            char comma;
            if (!(ss >> t >> comma >> l >> comma >> value))
                throw ConfigError("io: malformed sample row '" + line + "'");
        }
        if (t < 1 || t > T || l < 1 || l > L)
            throw ConfigError("io: sample row index out of range");
        coeffs(t - 1, l - 1) = value;
    }
    return SamplePath(BasisSpec(L), std::move(coeffs), std::move(sim_meta));
}

void write_periodogram_diagonal(const std::string& path, const PeriodogramSet& pset,
                                TableFormat format) {
    auto out = open_out(path);
    if (format == TableFormat::csv) out << "j,omega,l,value\n";
    for (std::size_t j = 0; j < pset.frames.size(); ++j) {
        for (int l = 0; l < pset.basis.L; ++l) {
            const double v = pset.frames[j](l, l).real();
            if (format == TableFormat::csv)
                out << (j + 1) << ',' << format_double(pset.grid.nodes[j]) << ',' << (l + 1) << ','
                    << format_double(v) << '\n';
            else
                out << "{\"j\":" << (j + 1) << ",\"omega\":" << format_double(pset.grid.nodes[j])
                    << ",\"l\":" << (l + 1) << ",\"value\":" << format_double(v) << "}\n";
        }
    }
}

}  // namespace lrdspec
