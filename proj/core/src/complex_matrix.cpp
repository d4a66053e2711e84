#include "permafinetti/complex_matrix.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace permafinetti {

namespace {

void validate_entries(std::size_t n_rows, std::size_t n_cols,
                      const std::vector<Complex>& entries) {
    if (n_cols < 1) throw std::invalid_argument("matrix needs at least one column");
    if (n_rows < n_cols) {
        throw std::invalid_argument("matrix must have n_rows >= n_cols (rectangular, tall)");
    }
    if (entries.size() != n_rows * n_cols) {
        throw std::invalid_argument("entry count does not match matrix shape");
    }
    for (const Complex& z : entries) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw std::invalid_argument("matrix entries must be finite");
        }
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t n_rows, std::size_t n_cols,
                             std::vector<Complex> entries)
    : n_rows_(n_rows), n_cols_(n_cols), entries_(std::move(entries)) {
    validate_entries(n_rows_, n_cols_, entries_);
    double max_abs2 = 0.0;
    for (const Complex& z : entries_) max_abs2 = std::max(max_abs2, std::norm(z));
    unit_bounded_ = std::sqrt(max_abs2) <= 1.0 + 1e-12;
}

ComplexMatrix::ComplexMatrix(const std::vector<std::vector<Complex>>& rows)
    : ComplexMatrix(rows.size(), rows.empty() ? 0 : rows.front().size(), [&rows] {
          std::vector<Complex> flat;
          for (const auto& row : rows) {
              if (row.size() != rows.front().size()) {
                  throw std::invalid_argument("ragged rows in matrix literal");
              }
              flat.insert(flat.end(), row.begin(), row.end());
          }
          return flat;
      }()) {}

std::vector<Complex> ComplexMatrix::column(std::size_t k) const {
    std::vector<Complex> col(n_rows_);
    for (std::size_t j = 0; j < n_rows_; ++j) col[j] = (*this)(j, k);
    return col;
}

ComplexMatrix ComplexMatrix::permuted_rows(const std::vector<std::size_t>& perm) const {
    if (perm.size() != n_rows_) throw std::invalid_argument("row permutation size mismatch");
    std::vector<Complex> entries(entries_.size());
    for (std::size_t j = 0; j < n_rows_; ++j) {
        for (std::size_t k = 0; k < n_cols_; ++k) {
            entries[j * n_cols_ + k] = (*this)(perm[j], k);
        }
    }
    return ComplexMatrix(n_rows_, n_cols_, std::move(entries));
}

ComplexMatrix ComplexMatrix::permuted_cols(const std::vector<std::size_t>& perm) const {
    if (perm.size() != n_cols_) throw std::invalid_argument("column permutation size mismatch");
    std::vector<Complex> entries(entries_.size());
    for (std::size_t j = 0; j < n_rows_; ++j) {
        for (std::size_t k = 0; k < n_cols_; ++k) {
            entries[j * n_cols_ + k] = (*this)(j, perm[k]);
        }
    }
    return ComplexMatrix(n_rows_, n_cols_, std::move(entries));
}

ComplexMatrix matrix_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    const auto n_rows = doc.at("N").get<std::size_t>();
    const auto n_cols = doc.at("n").get<std::size_t>();
    const auto& rows = doc.at("entries");
    if (!rows.is_array() || rows.size() != n_rows) {
        throw std::invalid_argument("matrix JSON: 'entries' must have N rows");
    }
    std::vector<Complex> entries;
    entries.reserve(n_rows * n_cols);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != n_cols) {
            throw std::invalid_argument("matrix JSON: each row must have n entries");
        }
        for (const auto& cell : row) {
            entries.emplace_back(cell.at("re").get<double>(), cell.at("im").get<double>());
        }
    }
    return ComplexMatrix(n_rows, n_cols, std::move(entries));
}

std::string matrix_to_json(const ComplexMatrix& z) {
    nlohmann::ordered_json doc;
    doc["N"] = z.rows();
    doc["n"] = z.cols();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < z.rows(); ++j) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < z.cols(); ++k) {
            row.push_back({{"re", z(j, k).real()}, {"im", z(j, k).imag()}});
        }
        rows.push_back(std::move(row));
    }
    doc["entries"] = std::move(rows);
    return doc.dump();
}

Complex parse_complex(const std::string& token) {
    std::string s;
    for (char c : token) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw std::invalid_argument("empty complex literal");

    // Split at the last +/- that is not part of an exponent and not leading.
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }

    auto parse_real = [](const std::string& part) {
        std::size_t used = 0;
        double v = std::stod(part, &used);
        if (used != part.size()) throw std::invalid_argument("bad numeric literal: " + part);
        return v;
    };
    auto parse_imag_part = [&parse_real](std::string part) {
        // "i", "+i", "-i", "2.5i"
        if (part.empty() || (part.back() != 'i' && part.back() != 'I' && part.back() != 'j')) {
            throw std::invalid_argument("imaginary part must end in i");
        }
        part.pop_back();
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        return parse_real(part);
    };

    const bool has_i = s.back() == 'i' || s.back() == 'I' || s.back() == 'j';
    if (!has_i) return Complex(parse_real(s), 0.0);
    if (split == std::string::npos) return Complex(0.0, parse_imag_part(s));
    return Complex(parse_real(s.substr(0, split)), parse_imag_part(s.substr(split)));
}

ComplexMatrix matrix_from_csv(const std::string& text) {
    std::vector<std::vector<Complex>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::vector<Complex> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(parse_complex(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("CSV matrix has no rows");
    return ComplexMatrix(rows);
}

ComplexMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        return matrix_from_json(text);
    }
    return matrix_from_csv(text);
}

}  // namespace permafinetti
