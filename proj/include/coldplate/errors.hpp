#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace coldplate {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownMaterialError : public Error {
public:
    explicit UnknownMaterialError(std::string key)
        : Error("unknown material '" + key + "'"), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// Nonpositive Reynolds/Prandtl numbers, negative dimensions and similar.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

class ZeroFlowError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "assembly validation failed:";
        for (const auto& s : v) out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> violations_;
};

// Grid cannot be built at the requested resolution, or is unusable for a solve.
class GridError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residual_history)
        : Error(what), history_(std::move(residual_history)) {}
    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> messages)
        : Error(join(messages)), messages_(std::move(messages)) {}
    const std::vector<std::string>& messages() const noexcept { return messages_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid configuration:";
        for (const auto& s : v) out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> messages_;
};

} // namespace coldplate
