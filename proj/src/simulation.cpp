#include "adi/simulation.hpp"

#include <cmath>
#include <random>
#include <set>

#include "adi/errors.hpp"
#include "fft.hpp"

namespace adi {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(base);
    for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return s;
}

CycleSimulator::CycleSimulator(StructureModel model, ExcitationConfig excitation, Execution exec,
                               std::optional<TransducerId> only_actuator)
    : model_(std::move(model)), excitation_(excitation) {
    model_.validate();
    excitation_.validate();
    ids_ = model_.transducer_ids();
    const std::size_t n = excitation_.sample_count();
    freqs_hz_.resize(n / 2 + 1);
    for (std::size_t k = 0; k < freqs_hz_.size(); ++k)
        freqs_hz_[k] = static_cast<double>(k) * excitation_.sample_rate_hz / static_cast<double>(n);

    if (only_actuator) model_.node_of(*only_actuator);
    for (TransducerId a : ids_) {
        if (only_actuator && a != *only_actuator) continue;
        const FrfMatrix full = frf_sweep(model_, model_.node_of(a), freqs_hz_, exec);
        FrfMatrix cols(freqs_hz_.size(), ids_.size());
        for (std::size_t k = 0; k < freqs_hz_.size(); ++k)
            for (std::size_t t = 0; t < ids_.size(); ++t) cols(k, t) = full(k, model_.node_of(ids_[t]));
        frf_.emplace(a, std::move(cols));
    }

    if (excitation_.kind == ExcitationKind::linear_chirp) {
        fixed_excitation_ = generate_excitation(excitation_, 0);
        detail::RealFft fft(n);
        fixed_spectrum_.resize(fft.spectrum_size());
        fft.forward(fixed_excitation_, fixed_spectrum_);
    }
}

TimeSeriesRecord CycleSimulator::record(TransducerId actuator, double noise_std, std::uint64_t seed) const {
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw ConfigError("noise_std must be finite and >= 0");
    const auto frf = frf_.find(actuator);
    if (frf == frf_.end()) throw LookupError("model has no transducer " + std::to_string(actuator));

    TimeSeriesRecord rec;
    rec.actuator_id = actuator;
    rec.sample_rate_hz = excitation_.sample_rate_hz;
    rec.transducer_ids = ids_;
    rec.excitation_config = excitation_;
    rec.seed = seed;

    const std::size_t n = excitation_.sample_count();
    detail::RealFft fft(n);
    std::vector<std::complex<double>> x_spec;
    if (fixed_spectrum_.empty()) {
        rec.excitation = generate_excitation(excitation_, derive_seed(seed, {0}));
        x_spec.resize(fft.spectrum_size());
        fft.forward(rec.excitation, x_spec);
    } else {
        rec.excitation = fixed_excitation_;
        x_spec = fixed_spectrum_;
    }

    std::vector<std::complex<double>> y_spec(fft.spectrum_size());
    for (std::size_t t = 0; t < ids_.size(); ++t) {
        for (std::size_t k = 0; k < y_spec.size(); ++k) y_spec[k] = x_spec[k] * frf->second(k, t);
        std::vector<double> y(n);
        fft.inverse(y_spec, y);
        if (noise_std > 0.0) {
            double power = 0.0;
            for (double v : y) power += v * v;
            const double sigma = noise_std * std::sqrt(power / static_cast<double>(n));
            std::mt19937_64 rng(derive_seed(seed, {1, static_cast<std::uint64_t>(ids_[t])}));
            std::normal_distribution<double> normal(0.0, sigma);
            for (double& v : y) v += normal(rng);
        }
        rec.responses.emplace(ids_[t], std::move(y));
    }
    return rec;
}

SignatureSet CycleSimulator::cycle(const SpectralParams& spectral, double noise_std, std::uint64_t seed,
                                   std::string label, Execution exec) const {
    if (ids_.size() < 2) throw ConfigError("an interrogation cycle needs at least 2 transducers");
    std::vector<TimeSeriesRecord> records(ids_.size());
    for_each_index(exec, ids_.size(), [&](std::size_t i) {
        records[i] = record(ids_[i], noise_std, derive_seed(seed, {static_cast<std::uint64_t>(ids_[i])}));
    });
    return signatures_from_records(records, spectral, std::move(label), exec);
}

TimeSeriesRecord simulate_response(const StructureModel& model, TransducerId actuator, const ExcitationConfig& excitation,
                                   double noise_std, std::uint64_t seed, Execution exec) {
    return CycleSimulator(model, excitation, exec, actuator).record(actuator, noise_std, seed);
}

SignatureSet signatures_from_records(std::span<const TimeSeriesRecord> records, const SpectralParams& spectral,
                                     std::string label, Execution exec) {
    if (records.size() < 2) throw DataError("a cycle needs recordings from at least 2 actuators");
    std::set<TransducerId> actuators;
    for (const auto& r : records) {
        if (r.transducer_ids != records.front().transducer_ids)
            throw DataError("cycle recordings disagree on the transducer set");
        if (!actuators.insert(r.actuator_id).second)
            throw DataError("cycle has two recordings for actuator " + std::to_string(r.actuator_id));
    }
    std::vector<PairKey> jobs;
    std::vector<std::size_t> job_record;
    for (std::size_t i = 0; i < records.size(); ++i)
        for (TransducerId s : records[i].transducer_ids)
            if (s != records[i].actuator_id) {
                jobs.push_back({records[i].actuator_id, s});
                job_record.push_back(i);
            }
    std::vector<TransferFunction> tfs(jobs.size());
    for_each_index(exec, jobs.size(), [&](std::size_t j) {
        tfs[j] = estimate_transfer_function(records[job_record[j]], jobs[j].sensor, spectral);
    });
    SignatureSet set;
    set.label = std::move(label);
    for (std::size_t j = 0; j < jobs.size(); ++j) set.pairs.emplace(jobs[j], std::move(tfs[j]));
    return set;
}

SignatureSet run_cycle(const StructureModel& model, const ExcitationConfig& excitation, const SpectralParams& spectral,
                       double noise_std, std::uint64_t seed, std::string label, Execution exec) {
    return CycleSimulator(model, excitation, exec).cycle(spectral, noise_std, seed, std::move(label), exec);
}

}  // namespace adi
