#pragma once

// Truncated full Fock space over the letters (i, j, k), free creation operators
// and the matrix model X_N(k) with semicircular entries.

#include <cstdint>
#include <functional>
#include <vector>

#include "freeconv/nc.hpp"

namespace freeconv {

/// Words of length <= depth over {0, ..., alphabet_size - 1}. A word of length l with
/// letters a_1 .. a_l has ordinal offset(l) + sum_r a_r alphabet^{l-r}.
class FockBasis {
 public:
  FockBasis(int alphabet_size, int depth);

  int alphabet_size() const { return alphabet_; }
  int depth() const { return depth_; }
  std::size_t dimension() const { return offsets_.back(); }
  /// First ordinal of the words of length l; offset(depth + 1) is the dimension.
  std::size_t offset(int l) const { return offsets_[l]; }

  std::size_t index(const std::vector<int>& word) const;
  std::vector<int> word(std::size_t index) const;
  int length(std::size_t index) const;

  /// Letter of the generator (i, j, k), 0-based, for an N x N x K family.
  static int letter(int N, int i, int j, int k) { return (k * N + i) * N + j; }

 private:
  int alphabet_;
  int depth_;
  std::vector<std::size_t> offsets_;
};

/// Throws SizeLimit when the dimension exceeds 10^6.
FockBasis build_fock(int N, int K, int D);

enum class FockTag { Creation, Annihilation, Composite };

/// Sparse operator with integer coefficients, stored as a coordinate list.
struct FockOperator {
  struct Entry {
    std::size_t row, col;
    std::int64_t value;
  };
  std::size_t dim = 0;
  FockTag tag = FockTag::Composite;
  std::vector<Entry> entries;

  template <class S>
  void apply_add(const std::vector<S>& x, std::vector<S>& y, S scale) const {
    for (const Entry& e : entries)
      if (x[e.col] != S(0)) y[e.row] += scale * S(e.value) * x[e.col];
  }

  FockOperator adjoint() const;
};

FockOperator creation(const FockBasis& basis, int letter);
FockOperator annihilation(const FockBasis& basis, int letter);
/// Sum with duplicate coordinates merged and zeros dropped.
FockOperator operator+(const FockOperator& a, const FockOperator& b);
FockOperator operator*(const FockOperator& a, const FockOperator& b);
bool operator==(const FockOperator& a, const FockOperator& b);

/// N x N matrix of operators equal to sqrt(scale_sq) times the integer entries.
struct OperatorMatrix {
  int N = 0;
  int depth = 0;
  Rational scale_sq{1};
  std::vector<FockOperator> entries;  // row-major

  const FockOperator& at(int i, int j) const { return entries[static_cast<std::size_t>(i) * N + j]; }
  bool self_adjoint() const;
};

/// L_N(k) = N^{-1/2} (l(i, j, k))_{ij}, k 0-based.
OperatorMatrix matrix_LN(const FockBasis& basis, int N, int k);
/// X_N(k) with entries (2N)^{-1/2} (l(i,j,k) + l(j,i,k) + l(i,j,k)* + l(j,i,k)*).
OperatorMatrix matrix_XN(const FockBasis& basis, int N, int k);

/// Max absolute entry of the four products L(k)*L(k'), (L(k)^t)*L(k')^t, (L(k)^t)*L(k'),
/// L(k)*L(k')^t minus delta_{kk'}{1, 1, 1/N, 1/N}, over all k, k' and matrix positions,
/// restricted to words of length <= depth - 1.
double check_L_relations(const FockBasis& basis, int N, int K);

struct FockMoment {
  Rational exact;  // set in exact mode
  double value = 0;
};

/// psi_N of the product X_{word[0]} ... X_{word[m-1]}: (1/N) sum_i <vacuum, (...)_{ii} vacuum>.
/// Throws TruncationTooShallow when depth < ceil(m / 2).
FockMoment psi_N_word(const std::vector<const OperatorMatrix*>& word, bool exact);

/// psi_N(X^m).
FockMoment psi_N_moment(const OperatorMatrix& X, int m, bool exact);

struct InfinitesimalMoment {
  Rational mu;
  Rational mu_prime;
};

/// Fits m -> moment(N, m) as a polynomial in 1/N of degree <= m/2 through N = 1 .. m/2 + 1
/// and returns its value and 1/N-coefficient at 1/N = 0, for m = 1 .. m_max.
std::vector<InfinitesimalMoment> infinitesimal_law_extract(const std::function<Rational(int, int)>& moment,
                                                           int m_max);

/// psi_N(X_N(1)^m) from a freshly built model of depth ceil(m/2).
Rational fock_moment_exact(int N, int m);

}  // namespace freeconv
