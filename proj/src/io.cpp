#include "ivlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ivlab {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return v;
}

std::vector<double> parse_grid(std::string_view s) {
    std::vector<double> out;
    if (s.find(':') != std::string_view::npos) {
        const auto p1 = s.find(':');
        const auto p2 = s.find(':', p1 + 1);
        if (p2 == std::string_view::npos) throw std::invalid_argument("range grids are written lo:step:hi");
        const double lo = parse_number(s.substr(0, p1));
        const double step = parse_number(s.substr(p1 + 1, p2 - p1 - 1));
        const double hi = parse_number(s.substr(p2 + 1));
        if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad range grid");
        const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long k = 0; k <= count; ++k) {
            // snap to the decimal grid so 0:0.1:1 yields 0.3 rather than 0.30000000000000004
            const double v = lo + static_cast<double>(k) * step;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.12g", v);
            out.push_back(parse_number(buf));
        }
        return out;
    }
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto tok = s.substr(start, comma == std::string_view::npos ? s.npos : comma - start);
        if (!tok.empty()) out.push_back(parse_number(tok));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty grid");
    return out;
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 2) throw std::invalid_argument("linspace needs at least two points");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (count - 1);
    out.back() = hi;
    return out;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace ivlab
