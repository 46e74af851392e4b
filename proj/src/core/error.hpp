#pragma once

#include <stdexcept>
#include <string>

namespace linproc {

enum class ErrorCode {
    invalid_argument = 1,
    degenerate = 2,
    precondition = 3,
    infeasible = 4,
    io = 5,
    parse = 6,
};

// All library failures are reported through this type; the C API maps the
// code one-to-one onto lp_status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, const std::string& what) {
    if (!condition) fail(ErrorCode::invalid_argument, what);
}

} // namespace linproc
