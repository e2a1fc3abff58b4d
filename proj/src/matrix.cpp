#include "cogload/matrix.hpp"

#include "cogload/error.hpp"

namespace cogload {

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw Error(ErrorCode::SchemaMismatch, "row width differs from matrix width");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> idx) const {
  Matrix out(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto src = row(idx[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> idx) const {
  Matrix out(rows_, idx.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = (*this)(r, idx[c]);
  }
  return out;
}

}  // namespace cogload
