#include "persbar/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "persbar/error.hpp"

namespace persbar {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_path_csv(std::ostream& os, const SampledPath& f) {
    os << "t,value\n";
    auto t = f.times();
    auto v = f.values();
    for (std::size_t i = 0; i < f.size(); ++i)
        os << format_double(t[i]) << ',' << format_double(v[i]) << '\n';
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, std::size_t line) {
    const std::string s = trim(text);
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw DomainError("path csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

}  // namespace

SampledPath read_path_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != "t,value")
        throw DomainError("path csv: expected header 't,value'");
    std::vector<double> t, v;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DomainError("path csv line " + std::to_string(lineno) + ": expected two columns");
        t.push_back(parse_number(line.substr(0, comma), lineno));
        v.push_back(parse_number(line.substr(comma + 1), lineno));
        if (t.size() > 1 && !(t[t.size() - 1] > t[t.size() - 2]))
            throw DomainError("path csv line " + std::to_string(lineno) + ": times not increasing");
    }
    return SampledPath(std::move(t), std::move(v));
}

SampledPath read_path_csv_file(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw DomainError("cannot open " + filename);
    return read_path_csv(in);
}

void write_barcode_csv(std::ostream& os, const Barcode& bc) {
    os << "birth,death,length\n";
    for (const Bar& b : bc.bars())
        os << format_double(b.birth) << ',' << format_double(b.death) << ','
           << format_double(b.length()) << '\n';
}

void write_diagram_csv(std::ostream& os, const Barcode& bc, Convention convention) {
    const char* name = convention == Convention::superlevel ? "superlevel" : "sublevel";
    os << "b,d,convention\n";
    for (auto [b, d] : diagram(bc, convention))
        os << format_double(b) << ',' << format_double(d) << ',' << name << '\n';
}

}  // namespace persbar
