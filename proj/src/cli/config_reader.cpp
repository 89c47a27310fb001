#include "config_reader.hpp"

#include <cmath>
#include <sstream>

namespace tvcqed::cli::detail {

namespace {

bool check_bound(double v, Bound b) {
    switch (b) {
        case Bound::positive:
            return v > 0.0;
        case Bound::non_negative:
            return v >= 0.0;
        case Bound::any:
            break;
    }
    return true;
}

const char* bound_text(Bound b) { return b == Bound::positive ? "must be > 0" : "must be >= 0"; }

}  // namespace

ObjectReader::ObjectReader(Issues& issues, const json& src, std::string path)
    : issues_(issues), src_(src), path_(std::move(path)) {
    if (!src_.is_object()) {
        issues_.add(path_.empty() ? "<root>" : path_, "expected an object");
        valid_ = false;
    }
}

const json* ObjectReader::find(const std::string& key) const {
    if (!valid_) return nullptr;
    const auto it = src_.find(key);
    if (it == src_.end() || it->is_null()) return nullptr;
    return &*it;
}

bool ObjectReader::has(const std::string& key) const { return find(key) != nullptr; }

double ObjectReader::number(const std::string& key, std::optional<double> def, Bound bound) {
    consumed_.insert(key);
    const json* v = find(key);
    if (!v) {
        if (!def) {
            issues_.add(path(key), "required field missing");
            return std::nan("");
        }
        out_[key] = *def;
        return *def;
    }
    if (!v->is_number()) {
        issues_.add(path(key), "expected a number");
        return std::nan("");
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) {
        issues_.add(path(key), "must be finite");
    } else if (!check_bound(x, bound)) {
        issues_.add(path(key), bound_text(bound));
    }
    out_[key] = x;
    return x;
}

std::optional<double> ObjectReader::optional_number(const std::string& key, Bound bound) {
    consumed_.insert(key);
    if (!find(key)) {
        out_[key] = nullptr;
        return std::nullopt;
    }
    return number(key, std::nullopt, bound);
}

long long ObjectReader::integer(const std::string& key, std::optional<long long> def, long long min) {
    consumed_.insert(key);
    const json* v = find(key);
    if (!v) {
        if (!def) {
            issues_.add(path(key), "required field missing");
            return min;
        }
        out_[key] = *def;
        return *def;
    }
    if (!v->is_number_integer()) {
        issues_.add(path(key), "expected an integer");
        return min;
    }
    const long long x = v->get<long long>();
    if (x < min) {
        issues_.add(path(key), "must be >= " + std::to_string(min));
    }
    out_[key] = x;
    return x;
}

bool ObjectReader::boolean(const std::string& key, bool def) {
    consumed_.insert(key);
    const json* v = find(key);
    if (!v) {
        out_[key] = def;
        return def;
    }
    if (!v->is_boolean()) {
        issues_.add(path(key), "expected true or false");
        return def;
    }
    out_[key] = v->get<bool>();
    return v->get<bool>();
}

std::string ObjectReader::string(const std::string& key, std::optional<std::string> def) {
    consumed_.insert(key);
    const json* v = find(key);
    if (!v) {
        if (!def) {
            issues_.add(path(key), "required field missing");
            return {};
        }
        out_[key] = *def;
        return *def;
    }
    if (!v->is_string()) {
        issues_.add(path(key), "expected a string");
        return {};
    }
    out_[key] = v->get<std::string>();
    return v->get<std::string>();
}

std::string ObjectReader::choice(const std::string& key, std::optional<std::string> def,
                                 std::initializer_list<const char*> options) {
    const std::size_t before = issues_.size();
    const std::string s = string(key, std::move(def));
    if (issues_.size() != before) return {};
    for (const char* o : options) {
        if (s == o) return s;
    }
    std::ostringstream msg;
    msg << "unknown value \"" << s << "\"; expected one of";
    for (const char* o : options) msg << " " << o;
    issues_.add(path(key), msg.str());
    return {};
}

cplx ObjectReader::complex(const std::string& key, std::optional<cplx> def) {
    consumed_.insert(key);
    const json* v = find(key);
    cplx z;
    if (!v) {
        if (!def) {
            issues_.add(path(key), "required field missing");
            return {};
        }
        z = *def;
    } else if (v->is_number()) {
        z = v->get<double>();
    } else if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number()) {
        z = cplx((*v)[0].get<double>(), (*v)[1].get<double>());
    } else {
        issues_.add(path(key), "expected a number or [re, im]");
        return {};
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) issues_.add(path(key), "must be finite");
    out_[key] = json::array({z.real(), z.imag()});
    return z;
}

std::vector<double> ObjectReader::numbers(const std::string& key, std::optional<std::vector<double>> def,
                                          std::size_t min_len, Bound bound) {
    consumed_.insert(key);
    const json* v = find(key);
    std::vector<double> xs;
    if (!v) {
        if (!def) {
            issues_.add(path(key), "required field missing");
            return {};
        }
        xs = *def;
    } else {
        if (!v->is_array()) {
            issues_.add(path(key), "expected an array of numbers");
            return {};
        }
        for (std::size_t i = 0; i < v->size(); ++i) {
            const auto& e = (*v)[i];
            if (!e.is_number() || !std::isfinite(e.get<double>())) {
                issues_.add(path(key) + "[" + std::to_string(i) + "]", "expected a finite number");
                return {};
            }
            if (!check_bound(e.get<double>(), bound)) {
                issues_.add(path(key) + "[" + std::to_string(i) + "]", bound_text(bound));
            }
            xs.push_back(e.get<double>());
        }
    }
    if (xs.size() < min_len) issues_.add(path(key), "needs at least " + std::to_string(min_len) + " entries");
    out_[key] = xs;
    return xs;
}

void ObjectReader::schedule(const std::string& key) {
    consumed_.insert(key);
    const json* v = find(key);
    if (!v) {
        issues_.add(path(key), "required field missing");
        return;
    }
    if (v->is_number()) {
        out_[key] = json{{"type", "constant"}, {"value", v->get<double>()}};
        return;
    }
    object(key, true, [&](ObjectReader& s) {
        const std::string type = s.choice("type", std::nullopt, {"constant", "sinusoidal", "linear_sweep"});
        if (type == "constant") {
            s.number("value", std::nullopt);
        } else if (type == "sinusoidal") {
            s.number("mean", std::nullopt);
            const double depth = s.number("depth", 0.0, Bound::non_negative);
            if (depth != 0.0 && !s.has("mod_frequency")) {
                s.mark_consumed("mod_frequency");
                issues_.add(s.path("mod_frequency"), "mod_frequency required when depth != 0");
            } else {
                s.number("mod_frequency", 0.0, Bound::non_negative);
            }
            s.number("phase", 0.0);
        } else if (type == "linear_sweep") {
            s.number("rate", std::nullopt);
            s.number("offset", 0.0);
        }
    });
}

void ObjectReader::finish() {
    if (!valid_) return;
    for (auto it = src_.begin(); it != src_.end(); ++it) {
        if (!consumed_.count(it.key())) issues_.add(path(it.key()), "unknown field");
    }
}

}  // namespace tvcqed::cli::detail
