#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ivlab {

/// Intrinsic volumes mu_n(0..n) of an n-dimensional body, stored as natural
/// logs. Index access past n yields -inf (higher intrinsic volumes of a
/// lower-dimensional set vanish).
class IntrinsicVolumeSequence {
public:
    IntrinsicVolumeSequence() : logv_{0.0} {}
    /// Throws std::invalid_argument if `logv` is empty or contains NaN/+inf.
    explicit IntrinsicVolumeSequence(std::vector<double> logv);

    /// Ambient dimension n; the sequence has n + 1 entries.
    int dim() const noexcept { return static_cast<int>(logv_.size()) - 1; }
    std::span<const double> logv() const noexcept { return logv_; }
    /// log mu(j), -inf for j < 0 or j > dim().
    double log_at(int j) const noexcept;
    double value(int j) const;
    std::vector<double> values() const;

    /// The point body: [1], the identity for convolution.
    static IntrinsicVolumeSequence point() { return IntrinsicVolumeSequence{}; }
    /// Keeps `v` for value()/values() so exactly representable closed forms read back exactly.
    static IntrinsicVolumeSequence from_values(std::span<const double> v);
    /// Log-values plus linear values where known exactly (NaN entries fall back to exp).
    static IntrinsicVolumeSequence with_exact_values(std::vector<double> logv, std::vector<double> exact);

    friend bool operator==(const IntrinsicVolumeSequence& a, const IntrinsicVolumeSequence& b) {
        return a.logv_ == b.logv_;
    }

private:
    std::vector<double> logv_;
    std::vector<double> exact_;
};

/// Convolution of two nonnegative sequences, evaluated with log-sum-exp.
IntrinsicVolumeSequence convolve(const IntrinsicVolumeSequence& a, const IntrinsicVolumeSequence& b);

/// {"n": int, "log_v": [float | "-inf"]}
void to_json(nlohmann::json& j, const IntrinsicVolumeSequence& s);
void from_json(const nlohmann::json& j, IntrinsicVolumeSequence& s);

} // namespace ivlab
