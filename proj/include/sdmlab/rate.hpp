#pragma once

#include <cstdint>
#include <string>

namespace sdmlab {

/// Exact sampling rate in Hz, held as a reduced fraction num/den.
///
/// Rates in the testbed are derived from the master clock by integer
/// division (f_H = f_ck / N, f_L = f_H / M); keeping them rational means
/// M * f_L == f_H compares exactly instead of within a float tolerance.
class Rate {
public:
    explicit Rate(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double hz() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rate divided_by(std::uint64_t n) const;
    Rate times(std::uint64_t n) const;

    // "100000000" for integral rates, "100000000/3" otherwise.
    std::string to_string() const;

    friend bool operator==(const Rate&, const Rate&) = default;

private:
    std::int64_t num_;
    std::int64_t den_;
};

/// Clock divider: f_H = f_ck / n_div, exact.
Rate divide_clock(const Rate& f_ck, std::uint64_t n_div);

}  // namespace sdmlab
