#include "sdmlab/rate.hpp"

#include <numeric>

#include "sdmlab/errors.hpp"

namespace sdmlab {

Rate::Rate(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (num <= 0 || den <= 0) {
        throw DomainError("rate must be a positive fraction");
    }
    const auto g = std::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
}

Rate Rate::divided_by(std::uint64_t n) const {
    if (n == 0) {
        throw DomainError("rate divisor must be >= 1");
    }
    const auto d = static_cast<std::int64_t>(n);
    const auto g = std::gcd(num_, d);
    return Rate(num_ / g, den_ * (d / g));
}

Rate Rate::times(std::uint64_t n) const {
    if (n == 0) {
        throw DomainError("rate multiplier must be >= 1");
    }
    const auto m = static_cast<std::int64_t>(n);
    const auto g = std::gcd(den_, m);
    return Rate(num_ * (m / g), den_ / g);
}

std::string Rate::to_string() const {
    if (den_ == 1) {
        return std::to_string(num_);
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rate divide_clock(const Rate& f_ck, std::uint64_t n_div) {
    if (n_div == 0) {
        throw DomainError("clock divider must be >= 1");
    }
    return f_ck.divided_by(n_div);
}

}  // namespace sdmlab
