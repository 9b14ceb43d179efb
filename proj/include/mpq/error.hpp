#pragma once

#include <stdexcept>
#include <string>

namespace mpq {

enum class ErrorCode {
    invalid_argument = 1,
    parse,
    range,
    singular,
    geometry,
    synthesis,
    unbounded_bandwidth,
    empty_band,
    io,
};

const char* to_string(ErrorCode code) noexcept;

// Library failure; the code maps one-to-one onto mpq_status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace mpq
