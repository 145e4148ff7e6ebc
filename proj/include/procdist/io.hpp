#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "procdist/core.hpp"
#include "procdist/hyptest.hpp"
#include "procdist/processes.hpp"

namespace procdist {

enum class SampleKind { automatic, discrete, real };

/// One value per line; blank lines and text after '#' are ignored. `automatic`
/// reads all-nonnegative-integer input as discrete, anything else as real.
/// A zero alphabet size means max symbol + 1 (at least 2).
Sample parse_sample_csv(std::string_view text, SampleKind kind = SampleKind::automatic,
                        std::uint32_t alphabet_size = 0, std::string_view source = "<input>");
/// A JSON array of numbers, or an object {"values": [...], "alphabet": k}.
Sample parse_sample_json(std::string_view text, SampleKind kind = SampleKind::automatic,
                         std::uint32_t alphabet_size = 0, std::string_view source = "<input>");
/// Dispatches on the extension (.json, anything else is CSV).
Sample load_sample(const std::string& path, SampleKind kind = SampleKind::automatic, std::uint32_t alphabet_size = 0);
std::string format_sample_csv(const Sample& x);
void save_sample_csv(const Sample& x, const std::string& path);

/// Same symbols over a larger discrete alphabet.
Sample with_alphabet_size(const Sample& x, std::uint32_t alphabet_size);

ProcessModel parse_model(std::string_view text, std::string_view source = "<input>");
ProcessModel load_model(const std::string& path);
std::string model_json(const ProcessModel& model);

/// A model, an array of models, or {"label": ..., "models": [...]}.
Hypothesis parse_hypothesis(std::string_view text, std::string_view source = "<input>");
Hypothesis load_hypothesis(const std::string& path);
/// FNV-1a (64-bit, hex) of the canonical JSON of the hypothesis models.
std::string hypothesis_hash(const Hypothesis& h);

std::string calibration_json(const CalibrationTable& cal);
CalibrationTable parse_calibration(std::string_view text, std::string_view source = "<input>");
CalibrationTable load_calibration(const std::string& path);
void save_calibration(const CalibrationTable& cal, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

} // namespace procdist
