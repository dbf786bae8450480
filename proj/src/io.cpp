#include "wxeb/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wxeb {

static_assert(std::endian::native == std::endian::little, "binary table format assumes little-endian host");

namespace {

constexpr char kMagic[4] = {'W', 'X', 'E', 'B'};
constexpr std::uint32_t kVersion = 1;

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

std::uint32_t parse_bitstring(const std::string& line, int n, const std::string& path) {
    if (static_cast<int>(line.size()) != n) io_fail(path, "inconsistent bitstring length");
    std::uint32_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const char c = line[static_cast<std::size_t>(i)];
        if (c == '1')
            idx |= 1u << i;  // leftmost character is qubit 1, mask bit 0
        else if (c != '0')
            io_fail(path, "non-binary character in bitstring");
    }
    return idx;
}

std::string format_bitstring(std::uint32_t idx, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
        if ((idx >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

}  // namespace

TableFormat parse_table_format(const std::string& s) {
    if (s == "text") return TableFormat::Text;
    if (s == "binary") return TableFormat::Binary;
    throw std::invalid_argument("table format must be 'text' or 'binary'");
}

SampleFormat parse_sample_format(const std::string& s) {
    if (s == "bitstrings") return SampleFormat::Bitstrings;
    if (s == "counts") return SampleFormat::Counts;
    throw std::invalid_argument("sample format must be 'bitstrings' or 'counts'");
}

ProbabilityTable load_probability_table(const std::string& path, TableFormat format) {
    ProbabilityTable table;
    if (format == TableFormat::Text) {
        std::ifstream in(path);
        if (!in) io_fail(path, "cannot open");
        std::string header;
        if (!std::getline(in, header) || header.rfind("n=", 0) != 0) io_fail(path, "malformed header, expected n=<k>");
        table.n = std::stoi(header.substr(2));
        if (table.n < 1 || table.n > 30) io_fail(path, "n out of range");
        const std::size_t m = std::size_t{1} << table.n;
        table.values.reserve(m);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            table.values.push_back(std::stod(line));
        }
        if (table.values.size() != m) io_fail(path, "length mismatch: expected 2^n rows");
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) io_fail(path, "cannot open");
        char magic[4];
        std::uint32_t version = 0, n = 0, reserved = 0;
        in.read(magic, 4);
        in.read(reinterpret_cast<char*>(&version), 4);
        in.read(reinterpret_cast<char*>(&n), 4);
        in.read(reinterpret_cast<char*>(&reserved), 4);
        if (!in || std::memcmp(magic, kMagic, 4) != 0) io_fail(path, "malformed header: bad magic");
        if (version != kVersion) io_fail(path, "unsupported format version");
        if (n < 1 || n > 30) io_fail(path, "n out of range");
        table.n = static_cast<int>(n);
        const std::size_t m = std::size_t{1} << table.n;
        table.values.resize(m);
        in.read(reinterpret_cast<char*>(table.values.data()), static_cast<std::streamsize>(m * sizeof(double)));
        if (!in) io_fail(path, "length mismatch: truncated payload");
        char extra;
        if (in.read(&extra, 1)) io_fail(path, "length mismatch: trailing bytes");
    }

    double sum = 0.0;
    for (double v : table.values) {
        if (std::isnan(v)) io_fail(path, "NaN entry");
        if (v < 0.0) io_fail(path, "negative entry");
        sum += v;
    }
    table.normalized = std::abs(sum - 1.0) <= 1e-9;
    return table;
}

void save_probability_table(const ProbabilityTable& table, const std::string& path, TableFormat format) {
    table.validate();
    if (format == TableFormat::Text) {
        std::ofstream out(path);
        if (!out) io_fail(path, "cannot open for writing");
        out << "n=" << table.n << "\n";
        out.precision(17);
        for (double v : table.values) out << v << "\n";
        if (!out) io_fail(path, "write failed");
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) io_fail(path, "cannot open for writing");
        const std::uint32_t n = static_cast<std::uint32_t>(table.n), reserved = 0;
        out.write(kMagic, 4);
        out.write(reinterpret_cast<const char*>(&kVersion), 4);
        out.write(reinterpret_cast<const char*>(&n), 4);
        out.write(reinterpret_cast<const char*>(&reserved), 4);
        out.write(reinterpret_cast<const char*>(table.values.data()),
                  static_cast<std::streamsize>(table.values.size() * sizeof(double)));
        if (!out) io_fail(path, "write failed");
    }
}

SampleSet load_samples(const std::string& path, SampleFormat format) {
    std::ifstream in(path);
    if (!in) io_fail(path, "cannot open");

    SampleSet out;
    std::string line;
    if (format == SampleFormat::Bitstrings) {
        std::vector<std::uint32_t> stream;
        int n = -1;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (n < 0) {
                n = static_cast<int>(line.size());
                if (n < 1 || n > 30) io_fail(path, "bitstring length out of range");
            }
            stream.push_back(parse_bitstring(line, n, path));
        }
        if (n < 0) io_fail(path, "empty sample file");
        out.n = n;
        out.counts.assign(std::size_t{1} << n, 0);
        for (std::uint32_t x : stream) ++out.counts[x];
        out.total = static_cast<std::int64_t>(stream.size());
        out.stream = std::move(stream);
    } else {
        int n = -1;
        std::vector<std::pair<std::uint32_t, std::int64_t>> entries;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ss(line);
            std::string bits;
            std::int64_t count = 0;
            if (!(ss >> bits >> count)) io_fail(path, "malformed counts line");
            if (count < 0) io_fail(path, "negative count");
            if (n < 0) {
                n = static_cast<int>(bits.size());
                if (n < 1 || n > 30) io_fail(path, "bitstring length out of range");
            }
            entries.emplace_back(parse_bitstring(bits, n, path), count);
        }
        if (n < 0) io_fail(path, "empty sample file");
        out.n = n;
        out.counts.assign(std::size_t{1} << n, 0);
        for (const auto& [idx, count] : entries) {
            out.counts[idx] += count;
            out.total += count;
        }
    }
    return out;
}

void save_samples(const SampleSet& samples, const std::string& path, SampleFormat format) {
    samples.validate();
    std::ofstream out(path);
    if (!out) io_fail(path, "cannot open for writing");
    if (format == SampleFormat::Bitstrings) {
        if (!samples.has_stream()) io_fail(path, "bitstrings format requires the ordered stream");
        for (std::uint32_t x : samples.stream) out << format_bitstring(x, samples.n) << "\n";
    } else {
        for (std::size_t i = 0; i < samples.counts.size(); ++i)
            if (samples.counts[i])
                out << format_bitstring(static_cast<std::uint32_t>(i), samples.n) << " " << samples.counts[i]
                    << "\n";
    }
    if (!out) io_fail(path, "write failed");
}

}  // namespace wxeb
