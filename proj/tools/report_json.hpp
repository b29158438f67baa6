#pragma once

// Minimal ordered JSON writer for run reports.  Doubles are serialized with
// 17 significant digits so reports round-trip bit-exactly; non-finite values
// become null (JSON has no NaN).

#include <cmath>
#include <string>
#include <vector>

#include "pplab/field_io.hpp"

namespace pplab::tool {

class JsonWriter {
  public:
    JsonWriter() { out_.reserve(4096); }

    void begin_object() {
        comma();
        out_ += '{';
        fresh_ = true;
    }
    void begin_object(const char* key) {
        comma();
        write_key(key);
        out_ += '{';
        fresh_ = true;
    }
    void end_object() {
        out_ += '}';
        fresh_ = false;
    }
    void begin_array(const char* key) {
        comma();
        write_key(key);
        out_ += '[';
        fresh_ = true;
    }
    void end_array() {
        out_ += ']';
        fresh_ = false;
    }

    void field(const char* key, double v) {
        comma();
        write_key(key);
        out_ += number(v);
    }
    void field(const char* key, int v) { field(key, static_cast<long long>(v)); }
    void field(const char* key, std::size_t v) { field(key, static_cast<long long>(v)); }
    void field(const char* key, long long v) {
        comma();
        write_key(key);
        out_ += std::to_string(v);
    }
    void field(const char* key, bool v) {
        comma();
        write_key(key);
        out_ += v ? "true" : "false";
    }
    void field(const char* key, const std::string& v) {
        comma();
        write_key(key);
        out_ += quote(v);
    }
    void field(const char* key, const char* v) { field(key, std::string(v)); }
    void field(const char* key, const std::vector<double>& v) {
        begin_array(key);
        for (double x : v) element(x);
        end_array();
    }
    void element(double v) {
        comma();
        out_ += number(v);
    }
    void element(const std::string& v) {
        comma();
        out_ += quote(v);
    }

    const std::string& str() const { return out_; }

  private:
    static std::string number(double v) {
        if (!std::isfinite(v)) return "null";
        return format_double(v);
    }
    static std::string quote(const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            switch (c) {
                case '"': q += "\\\""; break;
                case '\\': q += "\\\\"; break;
                case '\n': q += "\\n"; break;
                case '\t': q += "\\t"; break;
                default: q += c;
            }
        }
        q += '"';
        return q;
    }
    void write_key(const char* key) {
        out_ += quote(key);
        out_ += ':';
    }
    void comma() {
        if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[') out_ += ',';
        fresh_ = false;
    }

    std::string out_;
    bool fresh_ = true;
};

}  // namespace pplab::tool
