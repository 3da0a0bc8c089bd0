#pragma once

#include <complex>
#include <memory>

namespace nlchns {

using Complex = std::complex<double>;

// Real-to-complex 2D transform on a rows x cols array (row-major, cols fastest).
// Output has rows x (cols/2 + 1) entries. forward is unnormalized, inverse divides by rows*cols.
class RealFft {
 public:
  RealFft(int rows, int cols);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int spectral_cols() const { return cols_ / 2 + 1; }

  void forward(const double* in, Complex* out);
  void inverse(const Complex* in, double* out);

 private:
  struct Plans;
  int rows_, cols_;
  std::unique_ptr<Plans> plans_;
};

// 2D DCT pair diagonalizing the Neumann five-point Laplacian on an N x N cell grid.
class CosineTransform {
 public:
  explicit CosineTransform(int n);
  ~CosineTransform();
  CosineTransform(const CosineTransform&) = delete;
  CosineTransform& operator=(const CosineTransform&) = delete;

  int size() const { return n_; }
  void forward(const double* in, double* out);
  // exact inverse of forward
  void inverse(const double* in, double* out);

 private:
  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace nlchns
