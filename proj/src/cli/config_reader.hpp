#pragma once

// Typed, path-tracking access to a JSON config that records every problem instead of stopping at
// the first one, and builds the resolved (defaults filled) document as it goes.

#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tvcqed/cli/scenario.hpp"
#include "tvcqed/schedule.hpp"

namespace tvcqed::cli::detail {

class Issues {
public:
    void add(std::string path, std::string message) { list_.push_back({std::move(path), std::move(message)}); }
    bool empty() const { return list_.empty(); }
    std::size_t size() const { return list_.size(); }
    const std::vector<ConfigIssue>& list() const { return list_; }

private:
    std::vector<ConfigIssue> list_;
};

enum class Bound { any, positive, non_negative };

class ObjectReader {
public:
    ObjectReader(Issues& issues, const json& src, std::string path);

    std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const;
    json& out() { return out_; }

    double number(const std::string& key, std::optional<double> def, Bound bound = Bound::any);
    std::optional<double> optional_number(const std::string& key, Bound bound = Bound::any);
    long long integer(const std::string& key, std::optional<long long> def, long long min);
    bool boolean(const std::string& key, bool def);
    std::string string(const std::string& key, std::optional<std::string> def);
    std::string choice(const std::string& key, std::optional<std::string> def,
                       std::initializer_list<const char*> options);
    cplx complex(const std::string& key, std::optional<cplx> def);
    std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> def,
                                std::size_t min_len, Bound bound = Bound::any);
    // Schedules accept a bare number (constant) or a typed object.
    void schedule(const std::string& key);
    // Nested object; `fill` reads its fields.
    template <class F>
    void object(const std::string& key, bool required, F&& fill) {
        consumed_.insert(key);
        const json* src = find(key);
        if (!src) {
            if (required) {
                issues_.add(path(key), "required field missing");
                return;
            }
            static const json empty = json::object();
            src = &empty;
        }
        ObjectReader child(issues_, *src, path(key));
        if (!child.valid_) return;
        fill(child);
        child.finish();
        out_[key] = child.out_;
    }
    // Reports fields that were never read.
    void finish();
    void mark_consumed(const std::string& key) { consumed_.insert(key); }

private:
    const json* find(const std::string& key) const;

    Issues& issues_;
    const json& src_;
    std::string path_;
    json out_ = json::object();
    std::set<std::string> consumed_;
    bool valid_ = true;
};

}  // namespace tvcqed::cli::detail
