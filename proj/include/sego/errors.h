#pragma once

#include <stdexcept>
#include <string>

namespace sego {

enum class ErrorKind {
    InvalidInput,
    DegenerateTriangulation,
    Cheirality,
    DegenerateInstance,
    NumericFailure,
    EstimationFailed,
    ConfigurationInfeasible,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid_input(const std::string &msg) {
    throw Error(ErrorKind::InvalidInput, msg);
}
[[noreturn]] inline void throw_degenerate_triangulation(const std::string &msg) {
    throw Error(ErrorKind::DegenerateTriangulation, msg);
}
[[noreturn]] inline void throw_cheirality(const std::string &msg) { throw Error(ErrorKind::Cheirality, msg); }
[[noreturn]] inline void throw_degenerate_instance(const std::string &msg) {
    throw Error(ErrorKind::DegenerateInstance, msg);
}
[[noreturn]] inline void throw_numeric_failure(const std::string &msg) {
    throw Error(ErrorKind::NumericFailure, msg);
}
[[noreturn]] inline void throw_estimation_failed(const std::string &msg) {
    throw Error(ErrorKind::EstimationFailed, msg);
}
[[noreturn]] inline void throw_configuration_infeasible(const std::string &msg) {
    throw Error(ErrorKind::ConfigurationInfeasible, msg);
}

} // namespace sego
