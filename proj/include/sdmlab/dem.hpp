#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "sdmlab/modulator.hpp"
#include "sdmlab/random.hpp"
#include "sdmlab/signals.hpp"

namespace sdmlab {

/// N bipolar unit elements of nominal weight delta with static relative
/// errors, behind a global gain and offset.
struct ElementArray {
    std::size_t n_elements = 1;
    double delta = 1.0;
    std::vector<double> epsilons = std::vector<double>(1, 0.0);
    double gain = 1.0;
    double offset = 0.0;

    static ElementArray ideal(std::size_t n_elements, double delta);
    void validate() const;
};

/// i.i.d. Gaussian relative errors with std sigma_mm, mean-subtracted so they sum to zero.
ElementArray draw_mismatch(std::size_t n_elements, double sigma_mm, std::uint64_t seed,
                           double delta = 1.0);

/// Signed element count for a quantizer level: round(value / full_scale * N).
/// Throws DomainError when value is not one of the quantizer's levels or
/// does not land on an element boundary.
int code_of(double value, const Quantizer& q, std::size_t n_elements);

using ElementSet = std::vector<std::size_t>;

ElementSet select_thermometer(std::size_t code, std::size_t n_elements);

std::pair<ElementSet, Rng> select_random(std::size_t code, std::size_t n_elements, Rng rng);

struct DwaState {
    std::size_t pointer = 0;
    friend bool operator==(const DwaState&, const DwaState&) = default;
};

/// Rotating selection {p, ..., p+code-1} mod N; the pointer moves to p+code.
std::pair<ElementSet, DwaState> select_dwa(std::size_t code, std::size_t n_elements, DwaState state);

enum class Strategy { thermometer, random, dwa };

// How signed codes drive the DWA pointer.
enum class DwaPolarity {
    // One pointer moved by the signed code: a negative code selects the |c|
    // elements just below the pointer and steps it back. The mismatch error
    // is then exactly a first difference of the bounded cumulative error.
    signed_rotation,
    // one pointer per polarity; positive and negative codes rotate independently
    split,
    // one pointer advanced by |code| whatever the sign
    shared,
};

struct SelectionRecord {
    std::vector<ElementSet> sets;
    std::vector<std::uint64_t> usage;
};

struct DacOutput {
    SampledSignal v;
    SelectionRecord record;
};

/// v(n) = offset + gain * sign(c_n) * delta * sum_{i in S(n)} (1 + eps_i), |S(n)| = |c_n|.
DacOutput dac_convert(const QuantizedStream& stream, const ElementArray& array, Strategy strategy,
                      std::uint64_t seed,
                      DwaPolarity polarity = DwaPolarity::signed_rotation);

/// eDAC(n) = v(n) - offset - gain * delta * c_n.
SampledSignal edac_extract(const SampledSignal& v, const QuantizedStream& stream,
                           const ElementArray& array);

}  // namespace sdmlab
