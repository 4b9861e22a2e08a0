#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "index_set.hpp"
#include "util.hpp"

namespace roughconv {

// Finite prefix of a sequence in R^k, stored flat for cache-friendly scans.
struct SequencePrefix {
    std::vector<double> data;  // horizon * dim
    std::size_t dim = 1;
    std::size_t horizon = 0;
    std::string provenance;

    std::span<const double> point(std::size_t n) const {
        return {data.data() + n * dim, dim};
    }

    double coord(std::size_t n, std::size_t a) const { return data[n * dim + a]; }

    void validate() const {
        if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension cap is 8");
        if (data.size() != horizon * dim) throw std::invalid_argument("data size mismatch");
        for (double v : data)
            if (!std::isfinite(v)) throw std::invalid_argument("nonfinite coordinate");
    }

    std::string data_hash() const { return hex64(hash_doubles(data)); }
};

struct PartitionSpec {
    enum class Kind { Evens, Odds, Squares, Explicit };
    Kind kind = Kind::Evens;
    std::vector<std::size_t> indices;  // Explicit

    IndexSet realize(std::size_t horizon) const {
        switch (kind) {
            case Kind::Evens: return IndexSet::evens(horizon);
            case Kind::Odds: return IndexSet::odds(horizon);
            case Kind::Squares: return IndexSet::squares(horizon);
            default: {
                IndexSet s(horizon);
                for (auto i : indices)
                    if (i < horizon) s.set(i);
                return s;
            }
        }
    }

    std::string name() const {
        switch (kind) {
            case Kind::Evens: return "evens";
            case Kind::Odds: return "odds";
            case Kind::Squares: return "squares";
            default: return "explicit";
        }
    }
};

struct SequenceSpec {
    enum class Kind { TwoValue, Alternating, RationalsEnumeration, PerturbedAlternating, Csv, RandomBounded };

    Kind kind = Kind::Alternating;
    double base = 0;                 // TwoValue
    double step = 1;                 // TwoValue
    PartitionSpec partition;         // TwoValue / PerturbedAlternating spikes
    std::string csv_path;            // Csv
    std::uint64_t seed = 1;          // RandomBounded
    Box random_box;                  // RandomBounded

    static SequenceSpec two_value(double r, double h, PartitionSpec p) {
        SequenceSpec s;
        s.kind = Kind::TwoValue;
        s.base = r;
        s.step = h;
        s.partition = std::move(p);
        return s;
    }
    static SequenceSpec alternating() { return SequenceSpec{}; }
    static SequenceSpec rationals() {
        SequenceSpec s;
        s.kind = Kind::RationalsEnumeration;
        return s;
    }
    static SequenceSpec perturbed_alternating(PartitionSpec spikes = {PartitionSpec::Kind::Squares, {}}) {
        SequenceSpec s;
        s.kind = Kind::PerturbedAlternating;
        s.partition = std::move(spikes);
        return s;
    }
    static SequenceSpec csv(std::string path) {
        SequenceSpec s;
        s.kind = Kind::Csv;
        s.csv_path = std::move(path);
        return s;
    }
    static SequenceSpec random_bounded(std::uint64_t seed, Box box) {
        SequenceSpec s;
        s.kind = Kind::RandomBounded;
        s.seed = seed;
        s.random_box = std::move(box);
        return s;
    }
};

inline SequencePrefix load_csv(const std::string& path, std::size_t max_rows = 0);

inline SequencePrefix generate(const SequenceSpec& spec, std::size_t horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    SequencePrefix p;
    p.horizon = horizon;
    switch (spec.kind) {
        case SequenceSpec::Kind::TwoValue: {
            IndexSet a = spec.partition.realize(horizon);
            if (a.empty() || a.complemented().empty())
                throw std::invalid_argument("two-value partition needs both classes nonempty");
            p.data.resize(horizon);
            for (std::size_t n = 0; n < horizon; ++n)
                p.data[n] = a.contains(n) ? spec.base : spec.base + spec.step;
            p.provenance = "two_value(base=" + format_double(spec.base) + ",step=" + format_double(spec.step) +
                           ",on=" + spec.partition.name() + ")";
            break;
        }
        case SequenceSpec::Kind::Alternating: {
            p.data.resize(horizon);
            for (std::size_t n = 0; n < horizon; ++n) p.data[n] = (n % 2 == 0) ? 1.0 : -1.0;
            p.provenance = "alternating";
            break;
        }
        case SequenceSpec::Kind::RationalsEnumeration: {
            p.data.reserve(horizon);
            for (std::size_t q = 1; p.data.size() < horizon; ++q) {
                for (std::size_t num = 0; num <= q && p.data.size() < horizon; ++num) {
                    if (std::gcd(num, q) == 1)
                        p.data.push_back(static_cast<double>(num) / static_cast<double>(q));
                }
            }
            p.provenance = "rationals_enumeration";
            break;
        }
        case SequenceSpec::Kind::PerturbedAlternating: {
            IndexSet spikes = spec.partition.realize(horizon);
            p.data.resize(horizon);
            for (std::size_t n = 0; n < horizon; ++n)
                p.data[n] = spikes.contains(n) ? static_cast<double>(n) : ((n % 2 == 0) ? 1.0 : -1.0);
            p.provenance = "perturbed_alternating(spikes=" + spec.partition.name() + ")";
            break;
        }
        case SequenceSpec::Kind::Csv: {
            return load_csv(spec.csv_path, horizon);
        }
        case SequenceSpec::Kind::RandomBounded: {
            const Box& b = spec.random_box;
            if (b.dim() == 0) throw std::invalid_argument("random box required");
            for (std::size_t a = 0; a < b.dim(); ++a)
                if (!(b.side(a) > 0)) throw std::invalid_argument("random box must be nondegenerate");
            p.dim = b.dim();
            p.data.resize(horizon * p.dim);
            std::mt19937_64 eng(spec.seed);
            for (std::size_t n = 0; n < horizon; ++n) {
                for (std::size_t a = 0; a < p.dim; ++a) {
                    double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
                    p.data[n * p.dim + a] = b.lo[a] + u * b.side(a);
                }
            }
            p.provenance = "random_bounded(seed=" + std::to_string(spec.seed) + ")";
            break;
        }
    }
    p.validate();
    return p;
}

inline SequencePrefix load_csv(const std::string& path, std::size_t max_rows) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv: " + path);
    SequencePrefix p;
    std::string line;
    std::size_t row = 0, cols = 0;
    while (std::getline(in, line)) {
        if (max_rows && p.horizon >= max_rows) break;
        ++row;
        // strip CR and skip blank lines
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        bool blank = line.find_first_not_of(" \t") == std::string::npos;
        if (blank) continue;
        std::vector<double> vals;
        std::size_t pos = 0, col = 0;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            ++col;
            std::size_t b = cell.find_first_not_of(" \t");
            std::size_t e = cell.find_last_not_of(" \t");
            if (b == std::string::npos)
                throw std::runtime_error("csv parse error at row " + std::to_string(row) + ", column " +
                                         std::to_string(col));
            cell = cell.substr(b, e - b + 1);
            double v = 0;
            auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || !std::isfinite(v))
                throw std::runtime_error("csv parse error at row " + std::to_string(row) + ", column " +
                                         std::to_string(col));
            vals.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (cols == 0) {
            cols = vals.size();
            if (cols > kMaxDim) throw std::runtime_error("dimension cap is 8");
        } else if (vals.size() != cols) {
            throw std::runtime_error("ragged row " + std::to_string(row) + ": expected " + std::to_string(cols) +
                                     " columns, got " + std::to_string(vals.size()));
        }
        p.data.insert(p.data.end(), vals.begin(), vals.end());
        ++p.horizon;
    }
    if (p.horizon == 0) throw std::runtime_error("empty sequence");
    p.dim = cols;
    p.provenance = "csv:" + path + " (" + std::to_string(p.horizon) + " rows)";
    p.validate();
    return p;
}

inline void write_csv(const SequencePrefix& p, std::ostream& os) {
    for (std::size_t n = 0; n < p.horizon; ++n) {
        for (std::size_t a = 0; a < p.dim; ++a) {
            if (a) os << ',';
            os << format_double(p.coord(n, a));
        }
        os << '\n';
    }
}

// Componentwise min/max inflated by a margin; a degenerate side gets at least
// min_pad (or a unit pad when both are zero) so the box is usable as a grid
// domain.
inline Box bounding_box(const SequencePrefix& p, double margin_frac = 0.1, double min_pad = 0.0) {
    if (p.horizon == 0) throw std::invalid_argument("empty prefix");
    std::vector<double> lo(p.dim, std::numeric_limits<double>::infinity());
    std::vector<double> hi(p.dim, -std::numeric_limits<double>::infinity());
    for (std::size_t n = 0; n < p.horizon; ++n)
        for (std::size_t a = 0; a < p.dim; ++a) {
            lo[a] = std::min(lo[a], p.coord(n, a));
            hi[a] = std::max(hi[a], p.coord(n, a));
        }
    for (std::size_t a = 0; a < p.dim; ++a) {
        double pad = std::max(margin_frac * (hi[a] - lo[a]), min_pad);
        if (pad <= 0) pad = 1.0;
        lo[a] -= pad;
        hi[a] += pad;
    }
    return Box(lo, hi);
}

}  // namespace roughconv
