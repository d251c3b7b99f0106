#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>

namespace skein {

// (homological degree i, quantum degree j)
using Bidegree = std::pair<int, int>;

struct BigradedDims {
    std::map<Bidegree, long> dims;

    long at(int i, int j) const {
        auto it = dims.find({i, j});
        return it == dims.end() ? 0 : it->second;
    }
    void add(int i, int j, long n = 1) {
        if (n == 0) return;
        long& d = dims[{i, j}];
        d += n;
        if (d == 0) dims.erase({i, j});
    }
    long total() const {
        long t = 0;
        for (auto& [bd, n] : dims) t += n;
        return t;
    }
    long euler() const {
        long t = 0;
        for (auto& [bd, n] : dims) t += (bd.first % 2 == 0 ? n : -n);
        return t;
    }
    bool operator==(const BigradedDims& o) const { return dims == o.dims; }

    // "t^i q^j" Poincaré polynomial, q-major within each i.
    std::string poincare() const {
        if (dims.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [bd, n] : dims) {
            if (!first) os << " + ";
            first = false;
            if (n != 1) os << n << "*";
            bool needs_sep = false;
            if (bd.first != 0) { os << "t^" << bd.first; needs_sep = true; }
            if (bd.second != 0) {
                if (needs_sep) os << "*";
                os << "q^" << bd.second;
                needs_sep = true;
            }
            if (!needs_sep && n == 1) os << "1";
            else if (!needs_sep) { /* bare coefficient already printed */ }
        }
        return os.str();
    }

    // Tab-separated rows: i, j, dim.
    std::string table(const std::string& extra_header = "") const {
        std::ostringstream os;
        os << "i\tj\tdim" << (extra_header.empty() ? "" : "\t" + extra_header) << "\n";
        for (auto& [bd, n] : dims) os << bd.first << "\t" << bd.second << "\t" << n << "\n";
        return os.str();
    }
};

} // namespace skein
