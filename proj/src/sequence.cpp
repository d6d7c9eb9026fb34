#include "ivlab/sequence.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ivlab/logmath.hpp"

namespace ivlab {

IntrinsicVolumeSequence::IntrinsicVolumeSequence(std::vector<double> logv) : logv_(std::move(logv)) {
    if (logv_.empty()) throw std::invalid_argument("intrinsic volume sequence needs at least one entry");
    for (double x : logv_)
        if (std::isnan(x) || x == std::numeric_limits<double>::infinity())
            throw std::invalid_argument("intrinsic volume log-values must be finite or -inf");
}

double IntrinsicVolumeSequence::log_at(int j) const noexcept {
    if (j < 0 || j > dim()) return kNegInf;
    return logv_[static_cast<std::size_t>(j)];
}

double IntrinsicVolumeSequence::value(int j) const {
    if (j >= 0 && j <= dim() && !exact_.empty() && !std::isnan(exact_[static_cast<std::size_t>(j)]))
        return exact_[static_cast<std::size_t>(j)];
    return std::exp(log_at(j));
}

std::vector<double> IntrinsicVolumeSequence::values() const {
    std::vector<double> out(logv_.size());
    for (std::size_t j = 0; j < logv_.size(); ++j) out[j] = value(static_cast<int>(j));
    return out;
}

IntrinsicVolumeSequence IntrinsicVolumeSequence::with_exact_values(std::vector<double> logv, std::vector<double> exact) {
    IntrinsicVolumeSequence s(std::move(logv));
    if (exact.size() != s.logv_.size()) throw std::invalid_argument("exact values must match the sequence length");
    s.exact_ = std::move(exact);
    return s;
}

IntrinsicVolumeSequence IntrinsicVolumeSequence::from_values(std::span<const double> v) {
    std::vector<double> logv(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!(v[j] >= 0.0)) throw std::invalid_argument("intrinsic volumes must be nonnegative");
        logv[j] = v[j] == 0.0 ? kNegInf : std::log(v[j]);
    }
    return with_exact_values(std::move(logv), std::vector<double>(v.begin(), v.end()));
}

IntrinsicVolumeSequence convolve(const IntrinsicVolumeSequence& a, const IntrinsicVolumeSequence& b) {
    const int n = a.dim() + b.dim();
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    std::vector<double> terms;
    for (int j = 0; j <= n; ++j) {
        terms.clear();
        const int lo = std::max(0, j - b.dim());
        const int hi = std::min(j, a.dim());
        for (int i = lo; i <= hi; ++i) terms.push_back(a.log_at(i) + b.log_at(j - i));
        out[static_cast<std::size_t>(j)] = log_sum_exp(terms);
    }
    return IntrinsicVolumeSequence(std::move(out));
}

void to_json(nlohmann::json& j, const IntrinsicVolumeSequence& s) {
    auto arr = nlohmann::json::array();
    for (double x : s.logv()) {
        if (x == kNegInf) arr.push_back("-inf");
        else arr.push_back(x);
    }
    j = nlohmann::json{{"n", s.dim()}, {"log_v", std::move(arr)}};
}

void from_json(const nlohmann::json& j, IntrinsicVolumeSequence& s) {
    const int n = j.at("n").get<int>();
    const auto& arr = j.at("log_v");
    if (!arr.is_array() || static_cast<int>(arr.size()) != n + 1)
        throw std::invalid_argument("log_v must hold n + 1 entries");
    std::vector<double> logv;
    logv.reserve(arr.size());
    for (const auto& x : arr) {
        if (x.is_string()) {
            if (x.get<std::string>() != "-inf") throw std::invalid_argument("only \"-inf\" is allowed as a string");
            logv.push_back(kNegInf);
        } else {
            logv.push_back(x.get<double>());
        }
    }
    s = IntrinsicVolumeSequence(std::move(logv));
}

} // namespace ivlab
