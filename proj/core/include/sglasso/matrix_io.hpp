#pragma once
#include <sglasso/sym_matrix.hpp>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sglasso {

/// Row-major n×m block of values that need not be square (e.g. samples).
struct DenseMatrix
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double operator()(std::size_t i, std::size_t j) const noexcept { return values[i * cols + j]; }
};

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/*
 * Matrix CSV: one line per row, comma-separated decimal values, optionally
 * preceded by comment lines starting with '#'. Symmetric matrices are
 * validated on load (see SymMatrix::from_row_major).
 */
SymMatrix parse_matrix_csv(std::string_view text);
DenseMatrix parse_dense_csv(std::string_view text);
std::string to_csv(const SymMatrix& m, std::string_view header = {});
std::string to_csv(const DenseMatrix& m, std::string_view header = {});

SymMatrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const SymMatrix& m,
                      std::string_view header = {});
void write_dense_csv(const std::filesystem::path& path, const DenseMatrix& m,
                     std::string_view header = {});

std::string read_text(const std::filesystem::path& path);
/// Writes to a sibling temp file, then renames over the target.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

} // namespace sglasso
