#include "sdmlab/interleave.hpp"

#include <string>

#include "sdmlab/errors.hpp"

namespace sdmlab {

PolyphaseSet polyphase_decompose(const QuantizedStream& y, std::size_t m_paths) {
    if (m_paths == 0) {
        throw DomainError("polyphase decomposition needs M >= 1");
    }
    const Rate f_low = y.fs().divided_by(m_paths);
    std::vector<std::vector<std::uint32_t>> idx(m_paths);
    for (std::size_t k = 0; k < m_paths; ++k) {
        idx[k].reserve(y.size() / m_paths + 1);
    }
    for (std::size_t n = 0; n < y.size(); ++n) {
        idx[n % m_paths].push_back(y.index(n));
    }
    PolyphaseSet set{{}, m_paths, y.fs(), f_low};
    set.paths.reserve(m_paths);
    for (auto& p : idx) {
        set.paths.emplace_back(std::move(p), y.quantizer(), f_low);
    }
    return set;
}

QuantizedStream multiplex(const PolyphaseSet& set) {
    if (set.m_paths == 0 || set.paths.size() != set.m_paths) {
        throw InconsistencyError("polyphase set path count does not match M");
    }
    if (!(set.f_low.times(set.m_paths) == set.f_high)) {
        throw InconsistencyError("polyphase set rates violate f_L = f_H / M");
    }
    const auto& q = set.paths.front().quantizer();
    const std::size_t head = set.paths.front().size();
    std::size_t total = 0;
    bool shorter_seen = false;
    for (const auto& p : set.paths) {
        if (!(p.quantizer() == q)) {
            throw InconsistencyError("polyphase paths use different level sets");
        }
        if (!(p.fs() == set.f_low)) {
            throw InconsistencyError("polyphase path rate differs from f_L");
        }
        // lengths must be non-increasing with k and within one of path 0
        if (p.size() == head) {
            if (shorter_seen) {
                throw InconsistencyError("longer path follows a shorter one");
            }
        } else if (p.size() + 1 == head) {
            shorter_seen = true;
        } else {
            throw InconsistencyError("path lengths differ by more than one sample");
        }
        total += p.size();
    }
    std::vector<std::uint32_t> out(total);
    for (std::size_t k = 0; k < set.m_paths; ++k) {
        const auto& p = set.paths[k];
        for (std::size_t m = 0; m < p.size(); ++m) {
            out[m * set.m_paths + k] = p.index(m);
        }
    }
    return QuantizedStream(std::move(out), q, set.f_high);
}

PolyphaseSet ti_sdm_run(const ModulatorSpec& spec, std::size_t m_paths, const SampledSignal& x) {
    if (m_paths == 0) {
        throw DomainError("time-interleaved modulator needs M >= 1");
    }
    return polyphase_decompose(sdm_run(spec, x).y, m_paths);
}

std::vector<QuantizedStream> select_path_source(PathSource mode, const PolyphaseSet& set) {
    if (mode == PathSource::ti_paths) {
        return set.paths;
    }
    auto muxed = multiplex(set);
    // idle paths need a zero level; two-level sets get one inserted
    Quantizer idle_q = muxed.quantizer();
    if (!idle_q.index_of(0.0)) {
        auto lv = std::vector<double>(idle_q.levels().begin(), idle_q.levels().end());
        lv.insert(lv.begin() + static_cast<std::ptrdiff_t>(lv.size() / 2), 0.0);
        idle_q = Quantizer(std::move(lv));
    }
    const auto zero = static_cast<std::uint32_t>(*idle_q.index_of(0.0));
    const std::size_t len = muxed.size();
    std::vector<QuantizedStream> out;
    out.reserve(set.m_paths);
    out.push_back(std::move(muxed));
    for (std::size_t k = 1; k < set.m_paths; ++k) {
        out.emplace_back(std::vector<std::uint32_t>(len, zero), idle_q, set.f_high);
    }
    return out;
}

SampledSignal hold_on_high_rate(const SampledSignal& path, std::size_t m_paths, std::size_t phase,
                                std::size_t high_len) {
    if (m_paths == 0 || phase >= m_paths) {
        throw DomainError("hold_on_high_rate needs 0 <= phase < M");
    }
    std::vector<double> out(high_len, 0.0);
    for (std::size_t m = 0; m < path.size(); ++m) {
        const std::size_t start = m * m_paths + phase;
        for (std::size_t j = 0; j < m_paths && start + j < high_len; ++j) {
            out[start + j] = path[m];
        }
    }
    return SampledSignal(std::move(out), path.fs().times(m_paths));
}

}  // namespace sdmlab
