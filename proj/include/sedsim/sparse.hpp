#pragma once

#include <cstddef>
#include <vector>

namespace sedsim {

/// Row-compressed sparse matrix. Column indices are strictly increasing
/// within each row.
class CsrMatrix {
  public:
    CsrMatrix() = default;

    int rows() const { return n_; }
    int cols() const { return n_; }
    std::size_t nnz() const { return vals_.size(); }

    const std::vector<int>& row_offsets() const { return rowptr_; }
    const std::vector<int>& col_indices() const { return colidx_; }
    const std::vector<double>& values() const { return vals_; }

    /// y = A x
    void multiply(const std::vector<double>& x, std::vector<double>& y) const;

    /// Build from coordinate triplets (duplicates are summed).
    static CsrMatrix from_triplets(int n, std::vector<int> rows, std::vector<int> cols,
                                   std::vector<double> vals);

  private:
    int n_ = 0;
    std::vector<int> rowptr_;
    std::vector<int> colidx_;
    std::vector<double> vals_;
};

/// Convenience accumulator for assembling a sparse system.
class TripletList {
  public:
    explicit TripletList(int n) : n_(n) {}
    void add(int r, int c, double v) {
        if (v == 0.0) return;
        rows_.push_back(r);
        cols_.push_back(c);
        vals_.push_back(v);
    }
    CsrMatrix build() {
        return CsrMatrix::from_triplets(n_, std::move(rows_), std::move(cols_), std::move(vals_));
    }

  private:
    int n_;
    std::vector<int> rows_, cols_;
    std::vector<double> vals_;
};

struct SolverParams {
    double tol = 1e-6;        // relative residual ||b - A x|| <= tol ||b||
    int max_iters = 0;        // 0 -> 10 n
    double ssor_omega = 0.955;
    bool precondition = true;
};

enum class SolveStatus { converged, max_iterations, breakdown, invalid_diagonal };

struct SolveResult {
    std::vector<double> x;
    int iterations = 0;
    SolveStatus status = SolveStatus::converged;
    double residual = 0.0;  // recomputed ||b - A x||_2 at exit
    bool converged() const { return status == SolveStatus::converged; }
};

/// BiCGSTAB with SSOR preconditioning. Deterministic given inputs; no
/// breakdown restarts (systems here are small and well-behaved).
SolveResult bicgstab(const CsrMatrix& A, const std::vector<double>& b,
                     const std::vector<double>& x0, const SolverParams& params);

}  // namespace sedsim
