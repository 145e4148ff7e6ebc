#pragma once

#include <stdexcept>
#include <string>

namespace procdist {

enum class Errc {
    invalid_argument = 1,
    alphabet_mismatch,
    unsupported_model,
    no_unique_stationary,
    infeasible,
    calibration_mismatch,
    parse_error,
    io_error,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) {
        fail(Errc::invalid_argument, what);
    }
}

} // namespace procdist
