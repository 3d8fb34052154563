#include "sensoria/csv.hpp"

#include <cstdio>

#include "sensoria/error.hpp"

namespace sensoria::csv {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string format_int(long long v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", v);
    return buf;
}

std::string escape_field(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

Writer::Writer(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw PipelineError("csv", "cannot open for writing: " + path.string());
}

void Writer::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << escape_field(fields[i]);
    }
    out_ << '\n';
}

std::vector<std::vector<std::string>> read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError("csv", "cannot open for reading: " + path.string());

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        if (field_started || !fields.empty() || !field.empty()) {
            end_field();
            rows.push_back(std::move(fields));
            fields.clear();
        }
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
            field_started = true;  // next field exists even if empty
        } else if (c == '\n') {
            end_row();
        } else if (c == '\r') {
            // swallow; \n will close the row
        } else {
            field += c;
            field_started = true;
        }
    }
    end_row();
    return rows;
}

}  // namespace sensoria::csv
