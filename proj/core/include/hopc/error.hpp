#pragma once
#include <stdexcept>
#include <string>

namespace hopc {

// Exit-code convention: 1 input, 2 engine, 3 config.
struct Error : std::runtime_error {
  int exit_code;
  Error(std::string msg, int code) : std::runtime_error(std::move(msg)), exit_code(code) {}
};

struct InputError : Error {
  explicit InputError(std::string msg) : Error(std::move(msg), 1) {}
};

struct EngineError : Error {
  explicit EngineError(std::string msg) : Error(std::move(msg), 2) {}
};

struct ConfigError : Error {
  explicit ConfigError(std::string msg) : Error(std::move(msg), 3) {}
};

}  // namespace hopc
