#include "lambda_engine/config.hpp"

#include <cctype>
#include <cstdlib>

#include "lambda_engine/errors.hpp"

namespace lambda_engine {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// [first, last) trimmed view bounds within the line.
void trim(const std::string& s, size_t& first, size_t& last) {
    while (first < last && is_space(s[first])) ++first;
    while (last > first && is_space(s[last - 1])) --last;
}

}  // namespace

const ConfigEntry* ConfigSection::find(const std::string& key) const {
    for (const ConfigEntry& e : entries)
        if (e.key == key) return &e;
    return nullptr;
}

const ConfigSection* ConfigDoc::find(const std::string& name) const {
    for (const ConfigSection& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

ConfigDoc parse_config_text(const std::string& text) {
    ConfigDoc doc;
    ConfigSection* current = nullptr;

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t eol = text.find('\n', pos);
        const std::string line =
            text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        // strip comments
        std::string body = line;
        const size_t hash = body.find('#');
        if (hash != std::string::npos) body = body.substr(0, hash);

        size_t first = 0, last = body.size();
        trim(body, first, last);
        if (first == last) continue;

        if (body[first] == '[') {
            const size_t close = body.find(']', first);
            if (close == std::string::npos)
                throw ConfigError("unterminated section header", line_no,
                                  static_cast<int>(first) + 1);
            size_t nf = first + 1, nl = close;
            trim(body, nf, nl);
            if (nf == nl)
                throw ConfigError("empty section name", line_no,
                                  static_cast<int>(first) + 1);
            size_t tail_f = close + 1, tail_l = last;
            trim(body, tail_f, tail_l);
            if (tail_f != tail_l)
                throw ConfigError("trailing characters after section header", line_no,
                                  static_cast<int>(tail_f) + 1);
            ConfigSection sec;
            sec.name = body.substr(nf, nl - nf);
            sec.line = line_no;
            doc.sections.push_back(sec);
            current = &doc.sections.back();
            continue;
        }

        const size_t eq = body.find('=', first);
        if (eq == std::string::npos || eq >= last)
            throw ConfigError("expected 'key = value'", line_no,
                              static_cast<int>(first) + 1);
        size_t kf = first, kl = eq;
        trim(body, kf, kl);
        if (kf == kl)
            throw ConfigError("empty key", line_no, static_cast<int>(first) + 1);
        size_t vf = eq + 1, vl = last;
        trim(body, vf, vl);

        if (!current) {
            ConfigSection sec;
            sec.name = "";
            sec.line = line_no;
            doc.sections.push_back(sec);
            current = &doc.sections.back();
        }
        ConfigEntry e;
        e.key = body.substr(kf, kl - kf);
        e.value = body.substr(vf, vl - vf);
        e.line = line_no;
        e.col = static_cast<int>(kf) + 1;
        if (current->find(e.key))
            throw ConfigError("duplicate key '" + e.key + "'", line_no, e.col);
        current->entries.push_back(e);
    }
    return doc;
}

double entry_as_double(const ConfigEntry& e) {
    const char* begin = e.value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError("malformed number '" + e.value + "' for key '" + e.key + "'",
                          e.line, e.col);
    return v;
}

int entry_as_int(const ConfigEntry& e) {
    const double v = entry_as_double(e);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("expected an integer for key '" + e.key + "'", e.line, e.col);
    return i;
}

std::vector<double> entry_as_double_list(const ConfigEntry& e) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= e.value.size()) {
        size_t comma = e.value.find(',', pos);
        if (comma == std::string::npos) comma = e.value.size();
        ConfigEntry item = e;
        item.value = e.value.substr(pos, comma - pos);
        size_t f = 0, l = item.value.size();
        trim(item.value, f, l);
        item.value = item.value.substr(f, l - f);
        if (item.value.empty())
            throw ConfigError("empty element in list for key '" + e.key + "'", e.line,
                              e.col);
        out.push_back(entry_as_double(item));
        pos = comma + 1;
        if (comma == e.value.size()) break;
    }
    if (out.empty())
        throw ConfigError("empty list for key '" + e.key + "'", e.line, e.col);
    return out;
}

}  // namespace lambda_engine
