#include "rw2/io.hpp"

#include "rw2/errors.hpp"

#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace rw2 {

namespace {

constexpr char kMagic[4] = {'R', 'W', '2', 'M'};

bool parse_double(const std::string& tok, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        return pos == tok.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> toks;
    if (line.find(',') != std::string::npos) {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) toks.push_back(tok);
    } else {
        std::stringstream ss(line);
        std::string tok;
        while (ss >> tok) toks.push_back(tok);
    }
    return toks;
}

void require_finite(const Eigen::MatrixXd& m, const std::string& path) {
    if (!m.allFinite()) throw input_error(path + ": non-finite values");
}

} // namespace

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error(path + ": cannot open");
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    Eigen::Index width = -1;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = split_row(line);
        if (toks.empty()) continue;
        std::vector<double> row;
        row.reserve(toks.size());
        bool ok = true;
        for (const auto& t : toks) {
            double v = 0.0;
            if (!parse_double(t, v)) {
                ok = false;
                break;
            }
            row.push_back(v);
        }
        if (!ok) {
            if (first) {
                first = false; // header line
                continue;
            }
            throw input_error(path + ": unparseable row '" + line + "'");
        }
        first = false;
        if (width < 0)
            width = static_cast<Eigen::Index>(row.size());
        else if (width != static_cast<Eigen::Index>(row.size()))
            throw input_error(path + ": ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw input_error(path + ": no data rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), width);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < width; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][j];
    require_finite(m, path);
    return m;
}

Eigen::MatrixXd read_matrix_rw2m(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error(path + ": cannot open");
    char magic[4];
    std::uint32_t n = 0, d = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&d), 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw input_error(path + ": bad RW2M header");
    if (n == 0 || d == 0) throw input_error(path + ": empty RW2M matrix");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::vector<double> buf(static_cast<std::size_t>(n) * d);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(double)));
    if (!in || in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(double)))
        throw input_error(path + ": truncated RW2M payload");
    char extra;
    if (in.read(&extra, 1)) throw input_error(path + ": trailing bytes after RW2M payload");
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < d; ++j)
            m(i, j) = buf[static_cast<std::size_t>(i) * d + j];
    require_finite(m, path);
    return m;
}

Eigen::MatrixXd read_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error(path + ": cannot open");
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    in.close();
    if (std::memcmp(magic, kMagic, 4) == 0) return read_matrix_rw2m(path);
    return read_matrix_csv(path);
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw input_error(path + ": cannot open for writing");
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
    if (!out) throw input_error(path + ": write failed");
}

void write_matrix_rw2m(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error(path + ": cannot open for writing");
    const std::uint32_t n = static_cast<std::uint32_t>(m.rows());
    const std::uint32_t d = static_cast<std::uint32_t>(m.cols());
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&d), 4);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
    if (!out) throw input_error(path + ": write failed");
}

} // namespace rw2
