#pragma once

#include <Eigen/Core>

#include <string>

namespace rw2 {

/// Reads a sample matrix from CSV (one row per sample, comma or whitespace
/// separated, optional header line) or from the RW2M binary container,
/// sniffing the magic bytes. Throws input_error on malformed or non-finite
/// content.
Eigen::MatrixXd read_matrix(const std::string& path);

Eigen::MatrixXd read_matrix_csv(const std::string& path);
Eigen::MatrixXd read_matrix_rw2m(const std::string& path);

/// CSV with 17 significant digits, so a write/read round trip is exact.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

/// Binary container: magic "RW2M", u32 LE rows, u32 LE cols, then row-major
/// IEEE-754 little-endian doubles.
void write_matrix_rw2m(const std::string& path, const Eigen::MatrixXd& m);

} // namespace rw2
