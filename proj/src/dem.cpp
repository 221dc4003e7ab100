#include "sdmlab/dem.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "sdmlab/errors.hpp"

namespace sdmlab {

ElementArray ElementArray::ideal(std::size_t n_elements, double delta) {
    ElementArray a;
    a.n_elements = n_elements;
    a.delta = delta;
    a.epsilons.assign(n_elements, 0.0);
    a.validate();
    return a;
}

void ElementArray::validate() const {
    if (n_elements == 0) {
        throw DomainError("element array needs at least one element");
    }
    if (epsilons.size() != n_elements) {
        throw MismatchError("element array: one relative error per element required");
    }
    if (!(delta > 0.0) || !std::isfinite(delta) || !std::isfinite(gain) || !std::isfinite(offset)) {
        throw DomainError("element array weight, gain and offset must be finite (weight > 0)");
    }
    for (double e : epsilons) {
        if (!std::isfinite(e)) {
            throw DomainError("element relative error is not finite");
        }
    }
}

ElementArray draw_mismatch(std::size_t n_elements, double sigma_mm, std::uint64_t seed,
                           double delta) {
    if (!(sigma_mm >= 0.0) || !std::isfinite(sigma_mm)) {
        throw DomainError("mismatch sigma must be >= 0");
    }
    auto array = ElementArray::ideal(n_elements, delta);
    if (sigma_mm == 0.0) {
        return array;
    }
    Rng rng(seed);
    for (double& e : array.epsilons) {
        e = sigma_mm * rng.normal();
    }
    const double mean =
        std::accumulate(array.epsilons.begin(), array.epsilons.end(), 0.0) /
        static_cast<double>(n_elements);
    for (double& e : array.epsilons) {
        e -= mean;
    }
    return array;
}

int code_of(double value, const Quantizer& q, std::size_t n_elements) {
    if (n_elements == 0) {
        throw DomainError("code_of needs at least one element");
    }
    if (!q.index_of(value)) {
        throw DomainError("value " + std::to_string(value) + " is not a quantizer level");
    }
    const double scaled = value / q.full_scale() * static_cast<double>(n_elements);
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-9) {
        throw DomainError("level " + std::to_string(value) + " does not map to a whole element count");
    }
    return static_cast<int>(rounded);
}

namespace {

void require_code(std::size_t code, std::size_t n_elements) {
    if (code > n_elements) {
        throw RangeError("code " + std::to_string(code) + " exceeds element count " +
                         std::to_string(n_elements));
    }
}

}  // namespace

ElementSet select_thermometer(std::size_t code, std::size_t n_elements) {
    require_code(code, n_elements);
    ElementSet s(code);
    std::iota(s.begin(), s.end(), std::size_t{0});
    return s;
}

std::pair<ElementSet, Rng> select_random(std::size_t code, std::size_t n_elements, Rng rng) {
    require_code(code, n_elements);
    // partial Fisher-Yates; always consumes `code` draws so state advances predictably
    std::vector<std::size_t> pool(n_elements);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < code; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n_elements - i));
        std::swap(pool[i], pool[j]);
    }
    // code 0 still advances the generator by one draw
    if (code == 0) {
        rng.next_u64();
    }
    pool.resize(code);
    return {std::move(pool), rng};
}

std::pair<ElementSet, DwaState> select_dwa(std::size_t code, std::size_t n_elements, DwaState state) {
    require_code(code, n_elements);
    if (state.pointer >= n_elements) {
        throw RangeError("DWA pointer outside the element array");
    }
    ElementSet s(code);
    for (std::size_t i = 0; i < code; ++i) {
        s[i] = (state.pointer + i) % n_elements;
    }
    return {std::move(s), DwaState{(state.pointer + code) % n_elements}};
}

DacOutput dac_convert(const QuantizedStream& stream, const ElementArray& array, Strategy strategy,
                      std::uint64_t seed, DwaPolarity polarity) {
    array.validate();
    const std::size_t n_el = array.n_elements;
    const auto& q = stream.quantizer();

    // per-level code lookup
    std::vector<int> level_code(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const int c = code_of(q.levels()[i], q, n_el);
        if (static_cast<std::size_t>(std::abs(c)) > n_el) {
            throw RangeError("level code exceeds the element count");
        }
        level_code[i] = c;
    }

    Rng rng(seed);
    DwaState pos_state;
    DwaState neg_state;

    SelectionRecord record;
    record.sets.reserve(stream.size());
    record.usage.assign(n_el, 0);
    std::vector<double> v(stream.size());

    for (std::size_t n = 0; n < stream.size(); ++n) {
        const int c = level_code[stream.index(n)];
        const auto mag = static_cast<std::size_t>(std::abs(c));
        ElementSet set;
        switch (strategy) {
            case Strategy::thermometer:
                set = select_thermometer(mag, n_el);
                break;
            case Strategy::random: {
                auto [s, next] = select_random(mag, n_el, rng);
                set = std::move(s);
                rng = next;
                break;
            }
            case Strategy::dwa: {
                if (polarity == DwaPolarity::signed_rotation && c < 0) {
                    // {p-|c|, ..., p-1}, pointer moves to p-|c|
                    const DwaState back{(pos_state.pointer + n_el - mag % n_el) % n_el};
                    set = select_dwa(mag, n_el, back).first;
                    pos_state = back;
                    break;
                }
                DwaState& st = (polarity == DwaPolarity::split && c < 0) ? neg_state : pos_state;
                auto [s, next] = select_dwa(mag, n_el, st);
                set = std::move(s);
                st = next;
                break;
            }
        }
        double err = 0.0;
        for (auto i : set) {
            err += array.epsilons[i];
            ++record.usage[i];
        }
        const double sign = c < 0 ? -1.0 : 1.0;
        v[n] = array.offset + array.gain * sign * array.delta * (static_cast<double>(mag) + err);
        record.sets.push_back(std::move(set));
    }
    return DacOutput{SampledSignal(std::move(v), stream.fs()), std::move(record)};
}

SampledSignal edac_extract(const SampledSignal& v, const QuantizedStream& stream,
                           const ElementArray& array) {
    if (v.size() != stream.size()) {
        throw MismatchError("eDAC extraction: output and stream lengths differ");
    }
    array.validate();
    const auto& q = stream.quantizer();
    std::vector<double> level_ideal(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        level_ideal[i] = array.gain * array.delta *
                         static_cast<double>(code_of(q.levels()[i], q, array.n_elements));
    }
    std::vector<double> e(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        e[n] = v[n] - array.offset - level_ideal[stream.index(n)];
    }
    return SampledSignal(std::move(e), v.fs());
}

}  // namespace sdmlab
