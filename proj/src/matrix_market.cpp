#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "jbd/harness.hpp"

namespace jbd {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return s;
}

std::vector<std::string> split(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); });
}

long long parse_int(const std::string& tok, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0' || errno == ERANGE) throw ParseError(line, "expected an integer, got '" + tok + "'");
    return v;
}

double parse_real(const std::string& tok, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw ParseError(line, "expected a number, got '" + tok + "'");
    if (!std::isfinite(v)) throw ParseError(line, "non-finite value '" + tok + "'");
    return v;
}

enum class Symmetry { General, Symmetric, Skew };

}  // namespace

CsrMatrix read_matrix_market(std::istream& in) {
    std::string text;
    std::size_t line_no = 0;
    if (!std::getline(in, text)) throw ParseError(1, "empty input");
    ++line_no;

    const std::vector<std::string> head = split(text);
    if (head.empty() || lower(head[0]) != "%%matrixmarket") throw ParseError(line_no, "missing %%MatrixMarket banner");
    if (head.size() != 5) throw ParseError(line_no, "banner needs object, format, field and symmetry");
    if (lower(head[1]) != "matrix") throw ParseError(line_no, "unsupported object '" + head[1] + "'");
    const std::string format = lower(head[2]);
    const std::string field = lower(head[3]);
    const std::string sym_word = lower(head[4]);
    if (format != "coordinate" && format != "array") throw ParseError(line_no, "unknown format '" + head[2] + "'");
    if (field == "complex") throw Error(ErrorCode::Unsupported, "complex Matrix Market files are not supported");
    if (field != "real" && field != "integer" && field != "pattern" && field != "double")
        throw ParseError(line_no, "unknown field '" + head[3] + "'");
    const bool pattern = field == "pattern";
    if (pattern && format == "array") throw ParseError(line_no, "pattern field requires coordinate format");
    Symmetry sym;
    if (sym_word == "general") sym = Symmetry::General;
    else if (sym_word == "symmetric") sym = Symmetry::Symmetric;
    else if (sym_word == "skew-symmetric") sym = Symmetry::Skew;
    else if (sym_word == "hermitian") throw Error(ErrorCode::Unsupported, "hermitian matrices are not supported");
    else throw ParseError(line_no, "unknown symmetry '" + head[4] + "'");

    // size line, after comments
    std::vector<std::string> size_tok;
    while (std::getline(in, text)) {
        ++line_no;
        if (!text.empty() && text[0] == '%') continue;
        if (is_blank(text)) continue;
        size_tok = split(text);
        break;
    }
    if (size_tok.empty()) throw ParseError(line_no + 1, "missing size line");
    const bool coord = format == "coordinate";
    if (size_tok.size() != (coord ? 3u : 2u)) throw ParseError(line_no, "malformed size line");
    const long long rows = parse_int(size_tok[0], line_no);
    const long long cols = parse_int(size_tok[1], line_no);
    if (rows < 0 || cols < 0) throw ParseError(line_no, "negative dimension");
    if (sym != Symmetry::General && rows != cols) throw ParseError(line_no, "symmetric matrix must be square");
    long long expected = 0;
    if (coord) {
        expected = parse_int(size_tok[2], line_no);
        if (expected < 0) throw ParseError(line_no, "negative entry count");
    } else {
        expected = sym == Symmetry::General ? rows * cols
                   : sym == Symmetry::Symmetric ? rows * (rows + 1) / 2
                                                : rows * (rows - 1) / 2;
    }

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(expected) * (sym == Symmetry::General ? 1 : 2));
    auto add = [&](long long r, long long c, double v) {
        entries.push_back({r, c, v});
        if (r != c) {
            if (sym == Symmetry::Symmetric) entries.push_back({c, r, v});
            else if (sym == Symmetry::Skew) entries.push_back({c, r, -v});
        } else if (sym == Symmetry::Skew) {
            throw ParseError(line_no, "skew-symmetric matrix has a diagonal entry");
        }
    };

    long long seen = 0;
    long long array_col = 0;
    long long array_row = 0;
    if (!coord && sym == Symmetry::Skew) array_row = 1;
    while (seen < expected && std::getline(in, text)) {
        ++line_no;
        if (!text.empty() && text[0] == '%') continue;
        if (is_blank(text)) continue;
        const std::vector<std::string> tok = split(text);
        if (coord) {
            if (tok.size() != (pattern ? 2u : 3u)) throw ParseError(line_no, "malformed entry");
            const long long r = parse_int(tok[0], line_no);
            const long long c = parse_int(tok[1], line_no);
            if (r < 1 || r > rows || c < 1 || c > cols) throw ParseError(line_no, "index out of range");
            if (sym != Symmetry::General && c > r) throw ParseError(line_no, "entry above the diagonal in a symmetric file");
            add(r - 1, c - 1, pattern ? 1.0 : parse_real(tok[2], line_no));
        } else {
            if (tok.size() != 1) throw ParseError(line_no, "array entries hold one value per line");
            const double v = parse_real(tok[0], line_no);
            if (v != 0.0) add(array_row, array_col, v);
            // column-major, lower triangle only for symmetric storage
            if (++array_row == rows) {
                ++array_col;
                array_row = sym == Symmetry::General ? 0 : sym == Symmetry::Symmetric ? array_col : array_col + 1;
            }
        }
        ++seen;
    }
    if (seen < expected)
        throw ParseError(line_no + 1, "expected " + std::to_string(expected) + " entries, found " + std::to_string(seen));
    while (std::getline(in, text)) {
        ++line_no;
        if (!is_blank(text) && text[0] != '%') throw ParseError(line_no, "unexpected data after the last entry");
    }
    return CsrMatrix::from_triplets(rows, cols, std::move(entries));
}

CsrMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& m) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
    char buf[64];
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index k = m.row_starts()[r]; k < m.row_starts()[r + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", m.values()[k]);
            out << r + 1 << ' ' << m.col_indices()[k] + 1 << ' ' << buf << '\n';
        }
    }
}

void write_matrix_market(const std::string& path, const CsrMatrix& m) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    write_matrix_market(out, m);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace jbd
