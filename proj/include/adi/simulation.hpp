#pragma once

#include <cstdint>
#include <initializer_list>
#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "adi/baseline.hpp"
#include "adi/execution.hpp"
#include "adi/spectral.hpp"
#include "adi/structure.hpp"

namespace adi {

/// Mixes a base seed with a path of integers (splitmix64), giving independent
/// deterministic streams per cycle, actuator and channel.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Drives `actuator` with the configured excitation and synthesizes every
/// transducer channel by frequency-domain filtering through the analytic FRF
/// (circular convolution over the record). Each channel gets i.i.d. Gaussian
/// noise with std = noise_std * RMS(channel).
TimeSeriesRecord simulate_response(const StructureModel& model, TransducerId actuator, const ExcitationConfig& excitation,
                                   double noise_std, std::uint64_t seed, Execution exec = Execution::parallel);

/// Precomputed synthesis state for one structure and excitation: the drive
/// spectrum (for deterministic excitations) and the FRF of every transducer
/// node for every actuator. Monte Carlo loops reuse it across noise seeds.
class CycleSimulator {
public:
    /// `only_actuator` limits the precomputation to one drive point.
    CycleSimulator(StructureModel model, ExcitationConfig excitation, Execution exec = Execution::parallel,
                   std::optional<TransducerId> only_actuator = std::nullopt);

    const StructureModel& model() const { return model_; }
    const ExcitationConfig& excitation() const { return excitation_; }

    TimeSeriesRecord record(TransducerId actuator, double noise_std, std::uint64_t seed) const;
    SignatureSet cycle(const SpectralParams& spectral, double noise_std, std::uint64_t seed, std::string label = {},
                       Execution exec = Execution::parallel) const;

private:
    StructureModel model_;
    ExcitationConfig excitation_;
    std::vector<TransducerId> ids_;
    std::vector<double> freqs_hz_;
    std::map<TransducerId, FrfMatrix> frf_;  // per actuator: [freq][position in ids_]
    // Chirps do not depend on the seed, so their spectrum is computed once.
    std::vector<double> fixed_excitation_;
    std::vector<std::complex<double>> fixed_spectrum_;
};

/// Round-robin interrogation: each transducer excites once while all others
/// record; returns the n(n-1) estimated transfer functions.
SignatureSet run_cycle(const StructureModel& model, const ExcitationConfig& excitation, const SpectralParams& spectral,
                       double noise_std, std::uint64_t seed, std::string label = {},
                       Execution exec = Execution::parallel);

/// Estimates every actuator -> other-transducer transfer function from one
/// recording per actuator. Records must share a transducer set.
SignatureSet signatures_from_records(std::span<const TimeSeriesRecord> records, const SpectralParams& spectral,
                                     std::string label = {}, Execution exec = Execution::parallel);

}  // namespace adi
