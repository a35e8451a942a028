#include "freeconv/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "freeconv/errors.hpp"

namespace freeconv {

namespace {
constexpr std::size_t kMaxDimension = 1'000'000;
}

FockBasis::FockBasis(int alphabet_size, int depth) : alphabet_(alphabet_size), depth_(depth) {
  if (alphabet_size < 1 || depth < 0) throw Error(ErrorKind::InvalidSpec, "Fock basis needs alphabet >= 1, depth >= 0");
  offsets_.push_back(0);
  std::size_t level = 1;
  for (int l = 0; l <= depth; ++l) {
    if (offsets_.back() + level > kMaxDimension)
      throw Error(ErrorKind::SizeLimit, "Fock dimension exceeds " + std::to_string(kMaxDimension));
    offsets_.push_back(offsets_.back() + level);
    level *= static_cast<std::size_t>(alphabet_size);
  }
}

std::size_t FockBasis::index(const std::vector<int>& word) const {
  const int l = static_cast<int>(word.size());
  if (l > depth_) throw Error(ErrorKind::DomainError, "word longer than the truncation depth");
  std::size_t rank = 0;
  for (int a : word) {
    if (a < 0 || a >= alphabet_) throw Error(ErrorKind::DomainError, "letter outside the alphabet");
    rank = rank * alphabet_ + a;
  }
  return offsets_[l] + rank;
}

int FockBasis::length(std::size_t index) const {
  if (index >= dimension()) throw Error(ErrorKind::DomainError, "ordinal outside the basis");
  return static_cast<int>(std::upper_bound(offsets_.begin(), offsets_.end(), index) - offsets_.begin()) - 1;
}

std::vector<int> FockBasis::word(std::size_t index) const {
  const int l = length(index);
  std::size_t rank = index - offsets_[l];
  std::vector<int> w(l);
  for (int r = l - 1; r >= 0; --r) {
    w[r] = static_cast<int>(rank % alphabet_);
    rank /= alphabet_;
  }
  return w;
}

FockBasis build_fock(int N, int K, int D) {
  if (N < 1 || K < 1) throw Error(ErrorKind::InvalidSpec, "N and K must be positive");
  return FockBasis(N * N * K, D);
}

FockOperator FockOperator::adjoint() const {
  FockOperator r{dim, tag, {}};
  if (tag == FockTag::Creation) r.tag = FockTag::Annihilation;
  if (tag == FockTag::Annihilation) r.tag = FockTag::Creation;
  r.entries.reserve(entries.size());
  for (const Entry& e : entries) r.entries.push_back({e.col, e.row, e.value});
  return r;
}

FockOperator creation(const FockBasis& basis, int letter) {
  if (letter < 0 || letter >= basis.alphabet_size()) throw Error(ErrorKind::DomainError, "letter outside the alphabet");
  FockOperator op{basis.dimension(), FockTag::Creation, {}};
  std::size_t block = 1;  // alphabet^l
  // words of the top level are sent to zero
  for (int l = 0; l < basis.depth(); ++l) {
    for (std::size_t rank = 0; rank < block; ++rank)
      op.entries.push_back({basis.offset(l + 1) + letter * block + rank, basis.offset(l) + rank, 1});
    block *= basis.alphabet_size();
  }
  return op;
}

FockOperator annihilation(const FockBasis& basis, int letter) { return creation(basis, letter).adjoint(); }

namespace {

FockOperator from_map(std::size_t dim, const std::map<std::pair<std::size_t, std::size_t>, std::int64_t>& m) {
  FockOperator r{dim, FockTag::Composite, {}};
  for (const auto& [rc, v] : m)
    if (v != 0) r.entries.push_back({rc.first, rc.second, v});
  return r;
}

}  // namespace

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  if (a.dim != b.dim) throw Error(ErrorKind::DomainError, "operators on different bases");
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> m;
  for (const auto* op : {&a, &b})
    for (const auto& e : op->entries) m[{e.row, e.col}] += e.value;
  return from_map(a.dim, m);
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  if (a.dim != b.dim) throw Error(ErrorKind::DomainError, "operators on different bases");
  std::multimap<std::size_t, const FockOperator::Entry*> by_col;
  for (const auto& e : a.entries) by_col.emplace(e.col, &e);
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> m;
  for (const auto& eb : b.entries) {
    auto [lo, hi] = by_col.equal_range(eb.row);
    for (auto it = lo; it != hi; ++it) m[{it->second->row, eb.col}] += it->second->value * eb.value;
  }
  return from_map(a.dim, m);
}

bool operator==(const FockOperator& a, const FockOperator& b) {
  if (a.dim != b.dim) return false;
  FockOperator neg = b;
  for (auto& e : neg.entries) e.value = -e.value;
  return (a + neg).entries.empty();
}

bool OperatorMatrix::self_adjoint() const {
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (!(at(i, j) == at(j, i).adjoint())) return false;
  return true;
}

OperatorMatrix matrix_LN(const FockBasis& basis, int N, int k) {
  if (basis.alphabet_size() % (N * N) != 0 || k < 0 || k >= basis.alphabet_size() / (N * N))
    throw Error(ErrorKind::InvalidSpec, "basis does not match N and k");
  OperatorMatrix L{N, basis.depth(), Rational(1, N), {}};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) L.entries.push_back(creation(basis, FockBasis::letter(N, i, j, k)));
  return L;
}

OperatorMatrix matrix_XN(const FockBasis& basis, int N, int k) {
  if (basis.alphabet_size() % (N * N) != 0 || k < 0 || k >= basis.alphabet_size() / (N * N))
    throw Error(ErrorKind::InvalidSpec, "basis does not match N and k");
  OperatorMatrix X{N, basis.depth(), Rational(1, 2 * N), {}};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      FockOperator a = creation(basis, FockBasis::letter(N, i, j, k));
      FockOperator b = creation(basis, FockBasis::letter(N, j, i, k));
      X.entries.push_back(a + b + a.adjoint() + b.adjoint());
    }
  return X;
}

double check_L_relations(const FockBasis& basis, int N, int K) {
  if (basis.alphabet_size() != N * N * K) throw Error(ErrorKind::InvalidSpec, "basis does not match N and K");
  if (basis.depth() < 1) return 0.0;
  const std::size_t safe = basis.offset(basis.depth());  // words of length <= depth - 1
  auto cre = [&](int i, int j, int k) { return creation(basis, FockBasis::letter(N, i, j, k)); };
  double worst = 0;
  // N times each product entry is an integer operator; compare with N times the expected scalar.
  auto compare = [&](const FockOperator& op, std::int64_t diag) {
    std::map<std::size_t, std::int64_t> on_diag;
    for (const auto& e : op.entries) {
      if (e.col >= safe) continue;
      if (e.row == e.col) {
        on_diag[e.col] += e.value;
      } else {
        worst = std::max(worst, std::abs(static_cast<double>(e.value)) / N);
      }
    }
    for (std::size_t c = 0; c < safe; ++c) {
      auto it = on_diag.find(c);
      std::int64_t v = it == on_diag.end() ? 0 : it->second;
      worst = std::max(worst, std::abs(static_cast<double>(v - diag)) / N);
    }
  };
  for (int k = 0; k < K; ++k)
    for (int kp = 0; kp < K; ++kp)
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
          const bool same = k == kp && a == b;
          const FockOperator zero{basis.dimension(), FockTag::Composite, {}};
          FockOperator p1 = zero, p2 = zero, p3 = zero, p4 = zero;
          for (int l = 0; l < N; ++l) {
            p1 = p1 + cre(l, a, k).adjoint() * cre(l, b, kp);  // L*L
            p2 = p2 + cre(a, l, k).adjoint() * cre(b, l, kp);  // (L^t)*L^t
            p3 = p3 + cre(a, l, k).adjoint() * cre(l, b, kp);  // (L^t)*L
            p4 = p4 + cre(l, a, k).adjoint() * cre(b, l, kp);  // L*L^t
          }
          compare(p1, same ? N : 0);
          compare(p2, same ? N : 0);
          compare(p3, same ? 1 : 0);
          compare(p4, same ? 1 : 0);
        }
  return worst;
}

namespace {

// (X_{w0} ... X_{w(m-1)})_{ii} applied to the vacuum, read at the vacuum, summed over i,
// with every operator scaled by `scale`.
template <class S>
S trace_vacuum(const std::vector<const OperatorMatrix*>& word, const std::vector<S>& scales) {
  const int N = word.front()->N;
  const std::size_t dim = word.front()->entries.front().dim;
  S total(0);
  for (int i = 0; i < N; ++i) {
    std::vector<std::vector<S>> v(N, std::vector<S>(dim, S(0)));
    v[i][0] = S(1);
    for (int p = static_cast<int>(word.size()) - 1; p >= 0; --p) {
      std::vector<std::vector<S>> next(N, std::vector<S>(dim, S(0)));
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l) word[p]->at(j, l).apply_add(v[l], next[j], scales[p]);
      v = std::move(next);
    }
    total += v[i][0];
  }
  return total;
}

}  // namespace

FockMoment psi_N_word(const std::vector<const OperatorMatrix*>& word, bool exact) {
  if (word.empty()) return {Rational(1), 1.0};
  const int m = static_cast<int>(word.size());
  const int N = word.front()->N;
  for (const OperatorMatrix* X : word) {
    if (X->N != N) throw Error(ErrorKind::InvalidSpec, "matrices of different sizes");
    if (X->depth < (m + 1) / 2)
      throw Error(ErrorKind::TruncationTooShallow,
                  "depth " + std::to_string(X->depth) + " < ceil(m/2) = " + std::to_string((m + 1) / 2));
  }
  FockMoment r;
  if (exact) {
    std::int64_t count = trace_vacuum<std::int64_t>(word, std::vector<std::int64_t>(m, 1));
    if (count == 0) {
      r.exact = 0;
    } else {
      // the scale is sqrt(prod scale_sq); exact only when the factors pair up
      if (m % 2 != 0 || std::any_of(word.begin(), word.end(), [&](auto* X) { return X->scale_sq != word[0]->scale_sq; }))
        throw Error(ErrorKind::UnsupportedRepr, "exact mode needs an even word in equally scaled matrices");
      Rational s = 1;
      for (int p = 0; p < m / 2; ++p) s *= word[0]->scale_sq;
      r.exact = Rational(count) * s / N;
    }
    r.value = static_cast<double>(r.exact);
    return r;
  }
  std::vector<double> scales;
  for (const OperatorMatrix* X : word) scales.push_back(std::sqrt(static_cast<double>(X->scale_sq)));
  r.value = trace_vacuum<double>(word, scales) / N;
  return r;
}

FockMoment psi_N_moment(const OperatorMatrix& X, int m, bool exact) {
  if (m < 0) throw Error(ErrorKind::DomainError, "moment order must be non-negative");
  return psi_N_word(std::vector<const OperatorMatrix*>(m, &X), exact);
}

std::vector<InfinitesimalMoment> infinitesimal_law_extract(const std::function<Rational(int, int)>& moment,
                                                           int m_max) {
  std::vector<InfinitesimalMoment> out;
  for (int m = 1; m <= m_max; ++m) {
    const int d = m / 2;
    const int n = d + 1;
    // Vandermonde system in x = 1/N for the coefficients c_0 .. c_d.
    std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n + 1));
    for (int r = 0; r < n; ++r) {
      Rational x(1, r + 1), p(1);
      for (int c = 0; c < n; ++c) {
        A[r][c] = p;
        p *= x;
      }
      A[r][n] = moment(r + 1, m);
    }
    for (int c = 0; c < n; ++c) {
      int piv = c;
      while (A[piv][c] == 0) ++piv;
      std::swap(A[piv], A[c]);
      for (int r = 0; r < n; ++r) {
        if (r == c || A[r][c] == 0) continue;
        Rational f = A[r][c] / A[c][c];
        for (int q = c; q <= n; ++q) A[r][q] -= f * A[c][q];
      }
    }
    InfinitesimalMoment im;
    im.mu = A[0][n] / A[0][0];
    im.mu_prime = n > 1 ? A[1][n] / A[1][1] : Rational(0);
    out.push_back(im);
  }
  return out;
}

Rational fock_moment_exact(int N, int m) {
  if (m == 0) return 1;
  FockBasis basis = build_fock(N, 1, (m + 1) / 2);
  return psi_N_moment(matrix_XN(basis, N, 0), m, true).exact;
}

}  // namespace freeconv
