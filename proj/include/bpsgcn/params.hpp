#pragma once

#include "bpsgcn/ad.hpp"
#include "bpsgcn/errors.hpp"
#include "bpsgcn/rng.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace bpsgcn {

/// One named trainable array.
struct Param {
    std::string name;
    ad::Mat value;
    ad::Mat grad;

    void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

/// Ordered collection of named parameters. Order is creation order and is
/// part of the determinism contract (optimizer walks it in order).
class ParamStore {
public:
    Param& add(const std::string& name, ad::Mat init) {
        if (index_.count(name)) throw ArgumentError("duplicate parameter: " + name);
        auto p = std::make_unique<Param>();
        p->name = name;
        p->value = std::move(init);
        p->zero_grad();
        index_[name] = params_.size();
        params_.push_back(std::move(p));
        return *params_.back();
    }

    Param& at(const std::string& name) {
        auto it = index_.find(name);
        if (it == index_.end()) throw ArgumentError("unknown parameter: " + name);
        return *params_[it->second];
    }
    const Param& at(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw ArgumentError("unknown parameter: " + name);
        return *params_[it->second];
    }
    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    std::size_t size() const { return params_.size(); }
    Param& operator[](std::size_t i) { return *params_[i]; }
    const Param& operator[](std::size_t i) const { return *params_[i]; }

    void zero_grad() {
        for (auto& p : params_) p->zero_grad();
    }

    std::size_t scalar_count() const {
        std::size_t n = 0;
        for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
        return n;
    }

private:
    std::vector<std::unique_ptr<Param>> params_;
    std::map<std::string, std::size_t> index_;
};

/// Uniform(-a, a) init with a = sqrt(6 / (fan_in + fan_out)).
inline ad::Mat glorot(long rows, long cols, Rng& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
    ad::Mat m(rows, cols);
    for (long c = 0; c < cols; ++c)
        for (long r = 0; r < rows; ++r) m(r, c) = rng.uniform(-a, a);
    return m;
}

/// Tracks which parameters were placed on a tape so gradients can be pulled
/// back out after backward().
class TapeBind {
public:
    ad::Value use(ad::Tape& tape, Param& p) {
        ad::Value v = tape.input(p.value);
        bound_.emplace_back(&p, v);
        return v;
    }

    /// Adds tape gradients into Param::grad.
    void harvest(ad::Tape& tape) {
        for (auto& [p, v] : bound_) p->grad += tape.grad(v);
    }

private:
    std::vector<std::pair<Param*, ad::Value>> bound_;
};

} // namespace bpsgcn
