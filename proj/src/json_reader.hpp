#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace coldplate::detail {

// Reads one JSON object, collecting every problem instead of stopping at the
// first. finish() reports keys nobody asked for.
class ObjectReader {
public:
    ObjectReader(const nlohmann::json& j, std::string path, std::vector<std::string>& errors)
        : j_(j), path_(std::move(path)), errors_(errors), ok_(j.is_object()) {
        if (!ok_) errors_.push_back(path_ + ": expected an object");
    }

    bool ok() const { return ok_; }
    const std::string& path() const { return path_; }
    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) const { return ok_ && j_.contains(key); }

    const nlohmann::json* child(const std::string& key) {
        if (!ok_) return nullptr;
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::optional<double> number(const std::string& key) {
        const auto* v = child(key);
        if (v == nullptr) return std::nullopt;
        if (!v->is_number()) {
            errors_.push_back(at(key) + ": expected a number");
            return std::nullopt;
        }
        return v->get<double>();
    }

    double number(const std::string& key, double fallback) { return number(key).value_or(fallback); }

    double required_number(const std::string& key) {
        if (!has(key)) {
            if (ok_) errors_.push_back(at(key) + ": required");
            seen_.insert(key);
            return 0.0;
        }
        return number(key).value_or(0.0);
    }

    std::optional<int> integer(const std::string& key) {
        const auto* v = child(key);
        if (v == nullptr) return std::nullopt;
        if (!v->is_number_integer()) {
            errors_.push_back(at(key) + ": expected an integer");
            return std::nullopt;
        }
        return v->get<int>();
    }

    int required_integer(const std::string& key) {
        if (!has(key)) {
            if (ok_) errors_.push_back(at(key) + ": required");
            seen_.insert(key);
            return 0;
        }
        return integer(key).value_or(0);
    }

    std::optional<std::string> string(const std::string& key) {
        const auto* v = child(key);
        if (v == nullptr) return std::nullopt;
        if (!v->is_string()) {
            errors_.push_back(at(key) + ": expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::string required_string(const std::string& key) {
        if (!has(key)) {
            if (ok_) errors_.push_back(at(key) + ": required");
            seen_.insert(key);
            return {};
        }
        return string(key).value_or(std::string{});
    }

    Eigen::Vector2d pair(const std::string& key) {
        const auto* v = child(key);
        if (v == nullptr) {
            if (ok_) errors_.push_back(at(key) + ": required");
            return Eigen::Vector2d::Zero();
        }
        if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
            errors_.push_back(at(key) + ": expected [x, y]");
            return Eigen::Vector2d::Zero();
        }
        return {(*v)[0].get<double>(), (*v)[1].get<double>()};
    }

    void finish() {
        if (!ok_) return;
        for (const auto& [key, _] : j_.items()) {
            if (!seen_.count(key)) errors_.push_back(at(key) + ": unknown key '" + key + "'");
        }
    }

private:
    const nlohmann::json& j_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
    bool ok_;
};

} // namespace coldplate::detail
