#pragma once

#include <string>

#include "wxeb/types.hpp"

namespace wxeb {

enum class TableFormat { Text, Binary };
enum class SampleFormat { Bitstrings, Counts };

TableFormat parse_table_format(const std::string& s);
SampleFormat parse_sample_format(const std::string& s);

/// Text: first line `n=<k>`, then 2^k decimal reals in index order.
/// Binary: 16-byte header (magic "WXEB", version u32, n u32, reserved u32),
/// then 2^n little-endian doubles.
ProbabilityTable load_probability_table(const std::string& path, TableFormat format);
void save_probability_table(const ProbabilityTable& table, const std::string& path, TableFormat format);

/// Bitstrings: one 0/1 string of length n per line, leftmost char = qubit 1
/// (mask bit 0); ordered stream retained. Counts: `bitstring<space>count`.
SampleSet load_samples(const std::string& path, SampleFormat format);
void save_samples(const SampleSet& samples, const std::string& path, SampleFormat format);

}  // namespace wxeb
