#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "procdist/core.hpp"

namespace procdist {

/// Seeded mt19937_64. Variates are derived from raw 64-bit draws with fixed
/// arithmetic (no std:: distributions) so streams match across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }
    std::size_t categorical(std::span<const double> probs);

private:
    std::mt19937_64 gen_;
};

/// Independent stream seed for (seed, stream) via the splitmix64 finalizer.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

using Matrix = std::vector<std::vector<double>>;

struct IidSpec {
    std::vector<double> probs;
    friend bool operator==(const IidSpec&, const IidSpec&) = default;
};

/// Order-k chain. Row c of `transition` is the next-symbol law after context c,
/// where c encodes the last k symbols with the oldest most significant.
/// `init` (over contexts) absent means stationary start.
struct MarkovSpec {
    std::size_t order = 1;
    std::uint32_t alphabet = 2;
    Matrix transition;
    std::optional<std::vector<double>> init;
    friend bool operator==(const MarkovSpec&, const MarkovSpec&) = default;
};

/// Function of a Markov chain: hidden chain `transition`, emission kernel
/// states x symbols. `init` absent means stationary hidden start.
struct HmmSpec {
    Matrix transition;
    Matrix emission;
    std::optional<std::vector<double>> init;
    friend bool operator==(const HmmSpec&, const HmmSpec&) = default;
};

/// Thresholded rotation: r_i = r_{i-1} + alpha (mod 1), X_i = 1{r_i > 1/2}.
/// Ergodic only for irrational alpha. `r0` pins the hidden start.
struct TranslationSpec {
    double alpha = 0.0;
    std::optional<double> r0;
    friend bool operator==(const TranslationSpec&, const TranslationSpec&) = default;
};

/// Return-to-zero chain with switch/reset branches between consecutive level pairs
/// (levels[0], levels[1]], (levels[2], levels[3]], ...; an unpaired last level is ignored.
struct DiagonalSpec {
    double delta = 0.5;
    std::vector<std::size_t> levels;
    bool start_at_zero = false;
    friend bool operator==(const DiagonalSpec&, const DiagonalSpec&) = default;
};

class ProcessModel {
public:
    using Spec = std::variant<IidSpec, MarkovSpec, HmmSpec, TranslationSpec, DiagonalSpec>;

    /// Validates parameters; stationary starts are solved once here.
    explicit ProcessModel(Spec spec);

    static ProcessModel bernoulli(double p_one);
    /// Two-state chain with P(0->1) = p, P(1->0) = q, stationary start.
    static ProcessModel two_state_markov(double p, double q);

    const Spec& spec() const noexcept { return spec_; }
    std::string_view type_name() const noexcept;
    std::uint32_t alphabet_size() const noexcept { return alphabet_size_; }

    /// True for models whose finite-dimensional marginals are computable exactly.
    bool has_marginals() const noexcept;
    /// Probability of observing `word` at any fixed time under the stationary law.
    double marginal_prob(std::span<const Symbol> word) const;

    /// Stationary law over contexts (Markov) or hidden states (HMM); empty otherwise.
    const std::vector<double>& stationary() const noexcept { return stationary_; }

    friend bool operator==(const ProcessModel& a, const ProcessModel& b) { return a.spec_ == b.spec_; }

private:
    Spec spec_;
    std::uint32_t alphabet_size_ = 2;
    std::vector<double> stationary_;
};

Sample sample(const ProcessModel& model, std::size_t n, std::uint64_t seed);

/// Unique stationary law of a finite row-stochastic matrix; transient states get 0.
/// Throws no_unique_stationary for several closed classes or a periodic one.
std::vector<double> stationary_distribution(const Matrix& transition);

/// Stationary law over the k-symbol contexts of an order-k chain.
std::vector<double> stationary_init(const MarkovSpec& chain);

/// Order-1 chain on contexts induced by an order-k kernel.
Matrix context_chain(const MarkovSpec& chain);

struct TranslationRun {
    Sample sample;
    /// Hidden states r_1..r_n in 64-bit fixed point (value / 2^64).
    std::vector<std::uint64_t> hidden;
    std::uint64_t step;
};

TranslationRun translation_sample(const TranslationSpec& spec, std::size_t n, std::uint64_t seed);

struct DiagonalRun {
    Sample sample;
    /// Value of the first switch passed during the run (true = up), if any.
    std::optional<bool> first_switch_up;
    std::size_t returns_to_zero = 0;
};

DiagonalRun diagonal_adversary_sample(const DiagonalSpec& spec, std::size_t n, std::uint64_t seed);

} // namespace procdist
