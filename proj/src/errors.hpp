#pragma once

#include <stdexcept>
#include <string>

namespace fincorpus {

// Error categories; numeric values double as process exit codes.
enum class ErrorKind : int {
    usage = 1,
    config = 2,
    io = 3,
    data = 4,
};

class PipelineError : public std::runtime_error {
public:
    PipelineError(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) {
    throw PipelineError(ErrorKind::config, msg);
}

[[noreturn]] inline void throw_io(const std::string& msg) {
    throw PipelineError(ErrorKind::io, msg);
}

[[noreturn]] inline void throw_data(const std::string& msg) {
    throw PipelineError(ErrorKind::data, msg);
}

}  // namespace fincorpus
