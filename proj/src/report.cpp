#include "hartogs/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <variant>

namespace hartogs::report {

std::string format_double(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

} // namespace

struct Value::Impl {
    using Object = std::vector<std::pair<std::string, Value>>;
    using Array = std::vector<Value>;
    std::variant<double, long long, bool, std::string, Array, Object> data;
};

Value Value::number(double v) {
    Value out;
    out.impl_ = std::make_shared<Impl>();
    out.impl_->data = v;
    return out;
}

Value Value::integer(long long v) {
    Value out;
    out.impl_ = std::make_shared<Impl>();
    out.impl_->data = v;
    return out;
}

Value Value::boolean(bool v) {
    Value out;
    out.impl_ = std::make_shared<Impl>();
    out.impl_->data = v;
    return out;
}

Value Value::string(std::string v) {
    Value out;
    out.impl_ = std::make_shared<Impl>();
    out.impl_->data = std::move(v);
    return out;
}

Value Value::array() {
    Value out;
    out.impl_ = std::make_shared<Impl>();
    out.impl_->data = Impl::Array{};
    return out;
}

Value Value::object() {
    Value out;
    out.impl_ = std::make_shared<Impl>();
    out.impl_->data = Impl::Object{};
    return out;
}

bool Value::is_object() const { return std::holds_alternative<Impl::Object>(impl_->data); }
bool Value::is_array() const { return std::holds_alternative<Impl::Array>(impl_->data); }

Value& Value::set(const std::string& key, Value v) {
    if (!is_object()) throw std::logic_error("set() on a non-object report value");
    std::get<Impl::Object>(impl_->data).emplace_back(key, std::move(v));
    return *this;
}

Value& Value::push(Value v) {
    if (!is_array()) throw std::logic_error("push() on a non-array report value");
    std::get<Impl::Array>(impl_->data).push_back(std::move(v));
    return *this;
}

namespace {

void newline(std::string& out, int indent, int depth) {
    if (indent <= 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent) * depth, ' ');
}

} // namespace

std::string Value::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    out += '\n';
    return out;
}

void Value::dump_to(std::string& out, int indent, int depth) const {
    struct Visitor {
        std::string& out;
        int indent, depth;
        void operator()(double d) { out += format_double(d); }
        void operator()(long long i) { out += std::to_string(i); }
        void operator()(bool b) { out += b ? "true" : "false"; }
        void operator()(const std::string& s) { out += escape(s); }
        void operator()(const Value::Impl::Array& a) {
            if (a.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (i) out += ',';
                newline(out, indent, depth + 1);
                a[i].dump_to(out, indent, depth + 1);
            }
            newline(out, indent, depth);
            out += ']';
        }
        void operator()(const Value::Impl::Object& o) {
            if (o.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            for (std::size_t i = 0; i < o.size(); ++i) {
                if (i) out += ',';
                newline(out, indent, depth + 1);
                out += escape(o[i].first);
                out += indent > 0 ? ": " : ":";
                o[i].second.dump_to(out, indent, depth + 1);
            }
            newline(out, indent, depth);
            out += '}';
        }
    };
    std::visit(Visitor{out, indent, depth}, impl_->data);
}

Csv::Csv(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        out_ += header[i];
    }
    out_ += '\n';
}

void Csv::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ += ',';
        out_ += cells[i];
    }
    out_ += '\n';
}

} // namespace hartogs::report
