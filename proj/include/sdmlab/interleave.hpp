#pragma once

#include <cstddef>
#include <vector>

#include "sdmlab/modulator.hpp"
#include "sdmlab/rate.hpp"
#include "sdmlab/signals.hpp"

namespace sdmlab {

/// M low-rate streams y_k(m) = y(mM + k) and the rates they run at.
struct PolyphaseSet {
    std::vector<QuantizedStream> paths;
    std::size_t m_paths;
    Rate f_high;
    Rate f_low;
};

PolyphaseSet polyphase_decompose(const QuantizedStream& y, std::size_t m_paths);

/// Inverse of polyphase_decompose. Throws InconsistencyError when the path
/// lengths could not have come from a decomposition.
QuantizedStream multiplex(const PolyphaseSet& set);

/// Time-interleaved modulator: M path streams whose interleaving is the
/// single high-rate modulator output.
PolyphaseSet ti_sdm_run(const ModulatorSpec& spec, std::size_t m_paths, const SampledSignal& x);

enum class PathSource { ti_paths, muxed_high_speed };

/// Streams feeding the M path DACs. In muxed_high_speed mode path 0 carries
/// the multiplexed y(n) at f_H and the remaining paths are idle (all-zero
/// level streams at f_H, same length).
std::vector<QuantizedStream> select_path_source(PathSource mode, const PolyphaseSet& set);

/// Places a low-rate path output on the f_H grid: each sample of path k is
/// held for M high-rate periods starting at high-rate index mM + k. Output
/// length is `high_len`.
SampledSignal hold_on_high_rate(const SampledSignal& path, std::size_t m_paths, std::size_t phase,
                                std::size_t high_len);

}  // namespace sdmlab
