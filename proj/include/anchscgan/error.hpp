#pragma once

#include <stdexcept>
#include <string>

namespace anchscgan {

// One class per CLI exit code (0 = success, 1 = bad usage, reserved by the
// argument parser).
enum class ErrorCode {
    io = 2,          // missing/unreadable/unwritable files
    format = 3,      // malformed CSV, model file, or manifest
    value = 4,       // argument outside its documented domain
    state = 5,       // operation invalid for the data (single class, ...)
    divergence = 6,  // non-finite loss or parameters during training
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    ErrorCode code() const { return code_; }
    int exit_code() const { return static_cast<int>(code_); }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace anchscgan
