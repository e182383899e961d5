#pragma once

#include <cstdint>
#include <string>

#include "lrdspec/operator_core.hpp"
#include "lrdspec/simulation.hpp"
#include "lrdspec/spectral.hpp"

namespace lrdspec {

enum class TableFormat { csv, jsonl };

/// Shortest round-trip decimal representation; keeps text output stable
/// across runs and platforms.
std::string format_double(double v);

/// FNV-1a hash of a text blob, hex-encoded; used as the config hash.
std::string text_hash(const std::string& text);

/// HermitianFrame rows: row, col, re, im.
void write_frame(const std::string& path, const HermitianFrame& frame, TableFormat format);

/// DiagonalOperator rows: index, value.
void write_diagonal(const std::string& path, const DiagonalOperator& diag, TableFormat format);

/// SamplePath rows: t, l, value; plus a JSON sidecar <path>.meta.json with
/// {T, L, method, seed, theta_true}.
void write_sample_path(const std::string& path, const SamplePath& sample, TableFormat format);
SamplePath read_sample_path(const std::string& path);

/// Periodogram diagonal rows: j, omega, l, value.
void write_periodogram_diagonal(const std::string& path, const PeriodogramSet& pset,
                                TableFormat format);

void ensure_directory(const std::string& dir);

}  // namespace lrdspec
