#include "pplab/field_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pplab {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& tok, int row, int col) {
    const char* b = tok.data();
    const char* e = b + tok.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    double v = 0.0;
    const auto res = std::from_chars(b, e, v, std::chars_format::general);
    if (res.ec != std::errc{} || res.ptr != e)
        throw std::runtime_error("malformed CSV at row " + std::to_string(row) + ", column " +
                                 std::to_string(col) + ": cannot parse '" + tok + "'");
    return v;
}

std::string getline_or_fail(std::istream& is, int row) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("malformed CSV: unexpected end of input at row " +
                                 std::to_string(row));
    return line;
}

}  // namespace

void write_field_csv(const ScalarField& field, std::ostream& os) {
    const Grid2D& g = field.grid();
    os << g.nx() << ',' << g.ny() << ',' << format_double(g.spacing()) << ','
       << format_double(g.origin().x) << ',' << format_double(g.origin().y) << '\n';
    os << to_string(g.domain_kind()) << ',';
    if (g.domain_kind() == DomainKind::annulus)
        os << format_double(g.param2()) << ':' << format_double(g.param1());
    else
        os << format_double(g.param1());
    os << '\n';
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            if (i) os << ',';
            os << format_double(field.at(i, j));
        }
        os << '\n';
    }
}

void write_field_csv(const ScalarField& field, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_field_csv(field, os);
}

ScalarField read_field_csv(std::istream& is) {
    // Header line 1: nx,ny,spacing,origin_x,origin_y
    const auto h1 = split_csv_line(getline_or_fail(is, 1));
    if (h1.size() != 5)
        throw std::runtime_error("malformed CSV at row 1: expected 5 header fields, got " +
                                 std::to_string(h1.size()));
    const int nx = static_cast<int>(parse_double(h1[0], 1, 1));
    const int ny = static_cast<int>(parse_double(h1[1], 1, 2));
    const double spacing = parse_double(h1[2], 1, 3);
    const Vec2 origin{parse_double(h1[3], 1, 4), parse_double(h1[4], 1, 5)};

    // Header line 2: domain_kind,param
    const auto h2 = split_csv_line(getline_or_fail(is, 2));
    if (h2.size() != 2)
        throw std::runtime_error("malformed CSV at row 2: expected domain_kind,param");
    const DomainKind kind = domain_kind_from_string(h2[0]);
    double p1 = 0.0, p2 = 0.0;
    if (kind == DomainKind::annulus) {
        const auto sep = h2[1].find(':');
        if (sep == std::string::npos)
            throw std::runtime_error("malformed CSV at row 2, column 2: annulus expects inner:outer");
        p2 = parse_double(h2[1].substr(0, sep), 2, 2);
        p1 = parse_double(h2[1].substr(sep + 1), 2, 2);
    } else {
        p1 = parse_double(h2[1], 2, 2);
    }

    auto grid = std::make_shared<Grid2D>(kind, p1, p2, spacing, origin, nx, ny);
    ScalarField field(grid, kNaN);
    for (int j = 0; j < ny; ++j) {
        const int row = 3 + j;
        const auto toks = split_csv_line(getline_or_fail(is, row));
        if (static_cast<int>(toks.size()) != nx)
            throw std::runtime_error("malformed CSV at row " + std::to_string(row) + ": expected " +
                                     std::to_string(nx) + " values, got " +
                                     std::to_string(toks.size()));
        for (int i = 0; i < nx; ++i) field.at(i, j) = parse_double(toks[i], row, i + 1);
    }
    return field;
}

ScalarField read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return read_field_csv(is);
}

}  // namespace pplab
