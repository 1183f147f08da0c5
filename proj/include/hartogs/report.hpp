#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace hartogs::report {

/// Insertion-ordered JSON value with fixed float formatting (%.17g), so equal
/// inputs always serialise to byte-identical reports. Non-finite doubles
/// become the strings "inf", "-inf", "nan".
class Value {
public:
    static Value number(double v);
    static Value integer(long long v);
    static Value boolean(bool v);
    static Value string(std::string v);
    static Value array();
    static Value object();

    bool is_object() const;
    bool is_array() const;

    Value& set(const std::string& key, Value v); // object field, insertion order kept
    Value& push(Value v);                        // array element

    std::string dump(int indent = 2) const;

    struct Impl;

private:
    void dump_to(std::string& out, int indent, int depth) const;
    std::shared_ptr<Impl> impl_;
};

std::string format_double(double v);

/// CSV with a header row; doubles use the same %.17g formatting.
class Csv {
public:
    explicit Csv(std::vector<std::string> header);

    void row(const std::vector<std::string>& cells);
    std::string str() const { return out_; }

    static std::string cell(double v) { return format_double(v); }
    static std::string cell(long long v) { return std::to_string(v); }

private:
    std::string out_;
    std::size_t columns_;
};

} // namespace hartogs::report
