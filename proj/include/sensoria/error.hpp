#pragma once

#include <stdexcept>
#include <string>

namespace sensoria {

// Bad configuration or bad input data; maps to exit code 1.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mathematically undefined request (constant vector correlation, empty
// summary, ...).
class DegenerateInputError : public std::invalid_argument {
  public:
    explicit DegenerateInputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// I/O and other failures at run time; maps to exit code 2.
class PipelineError : public std::runtime_error {
  public:
    PipelineError(const std::string& stage, const std::string& msg)
        : std::runtime_error(stage + ": " + msg), stage_(stage) {}

    const std::string& stage() const { return stage_; }

  private:
    std::string stage_;
};

}  // namespace sensoria
