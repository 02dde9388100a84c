#pragma once
#include <vector>

#include "dephasim/types.hpp"

namespace dephasim {

// Dense row-major complex matrix. Value semantics; the heavy products go
// through the kernels layer (kernels.hpp), everything here is O(n^2) utility.
class CMat {
  public:
    CMat() = default;
    CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    CMat dagger() const;
    CMat transpose() const;
    CMat conj() const;

    cplx trace() const;
    double max_abs() const;
    double fro_norm() const;
    double one_norm() const;  // max column sum, used by expm scaling

    // max |A_ij - conj(A_ji)|
    double hermiticity_defect() const;

    CMat& operator+=(const CMat& o);
    CMat& operator-=(const CMat& o);
    CMat& operator*=(cplx s);

    friend CMat operator+(CMat a, const CMat& b) { return a += b; }
    friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
    friend CMat operator*(cplx s, CMat a) { return a *= s; }
    friend CMat operator*(CMat a, cplx s) { return a *= s; }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

double max_abs_diff(const CMat& a, const CMat& b);

using CVec = std::vector<cplx>;

double vec_norm(const CVec& v);
cplx vec_dot(const CVec& a, const CVec& b);  // conj(a) . b

}  // namespace dephasim
