#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Exact linear algebra over GF(2) for ambient dimension d <= 16.
// A vector is one machine word; bit i holds the coordinate of e_{i+1}.

namespace asq {

inline constexpr int kMaxDim = 16;

using Word = std::uint32_t;

inline int parity(Word w) { return std::popcount(w) & 1; }

inline int lowest_bit(Word w) { return std::countr_zero(w); }

inline void check_dim(int d) {
  if (d < 0 || d > kMaxDim)
    throw std::invalid_argument("gf2: ambient dimension out of range: " + std::to_string(d));
}

struct BitVector {
  Word bits = 0;
  int dim = 0;

  BitVector() = default;
  BitVector(Word b, int d) : bits(b), dim(d) {
    check_dim(d);
    if (d < 32 && (b >> d) != 0) throw std::invalid_argument("gf2: vector has bits beyond its dimension");
  }

  static BitVector unit(int i, int d) { return BitVector(Word{1} << i, d); }

  bool operator[](int i) const { return (bits >> i) & 1u; }
  bool is_zero() const { return bits == 0; }

  friend bool operator==(const BitVector&, const BitVector&) = default;
  friend BitVector operator+(BitVector a, const BitVector& b) {
    if (a.dim != b.dim) throw std::invalid_argument("gf2: dimension mismatch");
    a.bits ^= b.bits;
    return a;
  }
};

// Little-endian bit string: character i is the coefficient of e_{i+1}.
inline std::string to_string(const BitVector& v) {
  std::string s(static_cast<std::size_t>(v.dim), '0');
  for (int i = 0; i < v.dim; ++i)
    if (v[i]) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

inline BitVector parse_bitvector(std::string_view s) {
  check_dim(static_cast<int>(s.size()));
  Word b = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      b |= Word{1} << i;
    else if (s[i] != '0')
      throw std::invalid_argument("gf2: bad bit character in '" + std::string(s) + "'");
  }
  return BitVector(b, static_cast<int>(s.size()));
}

// Reduced row-echelon basis of a subspace of GF(2)^d. The pivot of a row is its
// lowest set bit; rows are sorted by pivot and every pivot column is clear in
// all other rows. The row list is therefore a canonical key for the subspace.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(int d) : dim_(d) { check_dim(d); }

  // Span of arbitrary words, all interpreted in dimension d.
  static Subspace from_words(int d, std::span<const Word> words) {
    Subspace s(d);
    for (Word w : words) s.insert(w);
    return s;
  }
  static Subspace from_words(int d, std::initializer_list<Word> words) {
    return from_words(d, std::span<const Word>(words.begin(), words.size()));
  }
  static Subspace full(int d) {
    Subspace s(d);
    for (int i = 0; i < d; ++i) s.rows_.push_back(Word{1} << i);
    return s;
  }

  int ambient_dim() const { return dim_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<Word>& rows() const { return rows_; }
  std::size_t size() const { return std::size_t{1} << rows_.size(); }

  Word reduce(Word v) const {
    for (Word r : rows_)
      if ((v >> lowest_bit(r)) & 1u) v ^= r;
    return v;
  }
  bool contains(Word v) const { return reduce(v) == 0; }
  bool contains(const BitVector& v) const {
    if (v.dim != dim_) throw std::invalid_argument("gf2: dimension mismatch");
    return contains(v.bits);
  }

  // Adds w to the span; returns false if it was already there.
  bool insert(Word w) {
    if (dim_ < 32 && (w >> dim_) != 0) throw std::invalid_argument("gf2: vector exceeds ambient dimension");
    w = reduce(w);
    if (w == 0) return false;
    const int p = lowest_bit(w);
    for (Word& r : rows_)
      if ((r >> p) & 1u) r ^= w;
    rows_.insert(std::upper_bound(rows_.begin(), rows_.end(), w,
                                  [](Word a, Word b) { return lowest_bit(a) < lowest_bit(b); }),
                 w);
    return true;
  }

  Word pivot_mask() const {
    Word m = 0;
    for (Word r : rows_) m |= Word{1} << lowest_bit(r);
    return m;
  }

  // All 2^rank elements in Gray-code order starting at 0.
  std::vector<Word> elements() const {
    std::vector<Word> out;
    out.reserve(size());
    Word cur = 0;
    out.push_back(0);
    for (std::size_t i = 1; i < size(); ++i) {
      cur ^= rows_[static_cast<std::size_t>(std::countr_zero(i))];
      out.push_back(cur);
    }
    return out;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.dim_ == b.dim_ && a.rows_ == b.rows_;
  }
  friend auto operator<=>(const Subspace& a, const Subspace& b) {
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    if (auto c = a.rows_.size() <=> b.rows_.size(); c != 0) return c;
    return a.rows_ <=> b.rows_;
  }

 private:
  int dim_ = 0;
  std::vector<Word> rows_;
};

inline Subspace rref(std::span<const BitVector> vectors) {
  if (vectors.empty()) return Subspace(0);
  const int d = vectors.front().dim;
  Subspace s(d);
  for (const auto& v : vectors) {
    if (v.dim != d) throw std::invalid_argument("gf2: rref inputs have mismatched dimensions");
    s.insert(v.bits);
  }
  return s;
}

inline Subspace rref(int d, std::span<const BitVector> vectors) {
  Subspace s(d);
  for (const auto& v : vectors) {
    if (v.dim != d) throw std::invalid_argument("gf2: rref inputs have mismatched dimensions");
    s.insert(v.bits);
  }
  return s;
}

inline Subspace span(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("gf2: span of subspaces with different ambient dimension");
  Subspace s = a;
  for (Word r : b.rows()) s.insert(r);
  return s;
}

// Zassenhaus: reduce rows (a|a) and (b|0); rows whose left half vanishes span
// the intersection in their right half.
inline Subspace meet(const Subspace& a, const Subspace& b) {
  const int d = a.ambient_dim();
  if (d != b.ambient_dim()) throw std::invalid_argument("gf2: meet of subspaces with different ambient dimension");
  std::vector<std::uint64_t> rows;
  for (Word r : a.rows()) rows.push_back(std::uint64_t{r} | (std::uint64_t{r} << d));
  for (Word r : b.rows()) rows.push_back(std::uint64_t{r});
  const std::uint64_t low = (std::uint64_t{1} << d) - 1;
  std::size_t rank = 0;
  for (int col = 0; col < 2 * d && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && !((rows[piv] >> col) & 1u)) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rank && ((rows[i] >> col) & 1u)) rows[i] ^= rows[rank];
    ++rank;
  }
  Subspace out(d);
  for (auto r : rows)
    if ((r & low) == 0 && r != 0) out.insert(static_cast<Word>(r >> d));
  return out;
}

// Number of k-dimensional subspaces of GF(2)^d.
inline std::uint64_t gaussian_binomial2(int d, int k) {
  if (k < 0 || k > d) return 0;
  std::uint64_t num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= (std::uint64_t{1} << (d - i)) - 1;
    den *= (std::uint64_t{1} << (i + 1)) - 1;
  }
  return num / den;
}

// Visits every k-subspace of GF(2)^d exactly once: pivot sets in
// lexicographic order, then free entries counted upward.
inline void for_each_subspace(int d, int k, const std::function<void(const Subspace&)>& fn) {
  check_dim(d);
  if (k < 0 || k > d) throw std::invalid_argument("gf2: subspace dimension out of range");
  std::vector<int> piv(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) piv[static_cast<std::size_t>(i)] = i;
  while (true) {
    Word pivmask = 0;
    for (int p : piv) pivmask |= Word{1} << p;
    // free positions per row: columns above the row pivot that are not pivots
    std::vector<std::vector<int>> free(static_cast<std::size_t>(k));
    int total = 0;
    for (int i = 0; i < k; ++i) {
      for (int c = piv[static_cast<std::size_t>(i)] + 1; c < d; ++c)
        if (!((pivmask >> c) & 1u)) free[static_cast<std::size_t>(i)].push_back(c);
      total += static_cast<int>(free[static_cast<std::size_t>(i)].size());
    }
    const std::uint64_t count = std::uint64_t{1} << total;
    for (std::uint64_t m = 0; m < count; ++m) {
      std::vector<Word> rows(static_cast<std::size_t>(k));
      int bit = 0;
      for (int i = 0; i < k; ++i) {
        Word r = Word{1} << piv[static_cast<std::size_t>(i)];
        for (int c : free[static_cast<std::size_t>(i)]) {
          if ((m >> bit) & 1u) r |= Word{1} << c;
          ++bit;
        }
        rows[static_cast<std::size_t>(i)] = r;
      }
      fn(Subspace::from_words(d, rows));
    }
    // next pivot combination
    int i = k - 1;
    while (i >= 0 && piv[static_cast<std::size_t>(i)] == d - k + i) --i;
    if (i < 0) break;
    ++piv[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) piv[static_cast<std::size_t>(j)] = piv[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline std::vector<Subspace> enumerate_subspaces(int d, int k) {
  std::vector<Subspace> out;
  out.reserve(static_cast<std::size_t>(gaussian_binomial2(d, k)));
  for_each_subspace(d, k, [&](const Subspace& s) { out.push_back(s); });
  return out;
}

// Newline-separated basis rows.
inline std::string to_string(const Subspace& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.rows().size(); ++i) {
    if (i) os << '\n';
    os << to_string(BitVector(s.rows()[i], s.ambient_dim()));
  }
  return os.str();
}

inline Subspace parse_subspace(int d, std::string_view text) {
  Subspace s(d);
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    BitVector v = parse_bitvector(line);
    if (v.dim != d) throw std::invalid_argument("gf2: basis row has wrong length");
    s.insert(v.bits);
  }
  return s;
}

// d x d matrix over GF(2), stored by columns: col[j] is the image of e_{j+1}.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int d) : dim_(d), cols_(static_cast<std::size_t>(d), 0) { check_dim(d); }

  static BitMatrix identity(int d) {
    BitMatrix m(d);
    for (int j = 0; j < d; ++j) m.cols_[static_cast<std::size_t>(j)] = Word{1} << j;
    return m;
  }
  static BitMatrix from_columns(std::vector<Word> cols) {
    BitMatrix m(static_cast<int>(cols.size()));
    m.cols_ = std::move(cols);
    return m;
  }
  // rows[i] bit j = entry (i, j)
  static BitMatrix from_rows(const std::vector<Word>& rows) {
    const int d = static_cast<int>(rows.size());
    BitMatrix m(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if ((rows[static_cast<std::size_t>(i)] >> j) & 1u) m.cols_[static_cast<std::size_t>(j)] |= Word{1} << i;
    return m;
  }

  int dim() const { return dim_; }
  const std::vector<Word>& columns() const { return cols_; }
  bool at(int i, int j) const { return (cols_[static_cast<std::size_t>(j)] >> i) & 1u; }

  Word apply(Word v) const {
    Word r = 0;
    while (v) {
      r ^= cols_[static_cast<std::size_t>(lowest_bit(v))];
      v &= v - 1;
    }
    return r;
  }

  // (a * b)(v) = a(b(v))
  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("gf2: matrix dimension mismatch");
    BitMatrix m(a.dim_);
    for (int j = 0; j < a.dim_; ++j) m.cols_[static_cast<std::size_t>(j)] = a.apply(b.cols_[static_cast<std::size_t>(j)]);
    return m;
  }
  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;
  friend auto operator<=>(const BitMatrix&, const BitMatrix&) = default;

  bool invertible() const { return Subspace::from_words(dim_, cols_).rank() == dim_; }

  BitMatrix inverse() const {
    // Solve by tracking combinations: row-reduce the columns as vectors.
    const int d = dim_;
    std::vector<std::uint64_t> aug(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) aug[static_cast<std::size_t>(j)] = std::uint64_t{cols_[static_cast<std::size_t>(j)]} | (std::uint64_t{1} << (d + j));
    int rank = 0;
    for (int bit = 0; bit < d; ++bit) {
      int piv = rank;
      while (piv < d && !((aug[static_cast<std::size_t>(piv)] >> bit) & 1u)) ++piv;
      if (piv == d) throw std::domain_error("gf2: matrix is singular");
      std::swap(aug[static_cast<std::size_t>(rank)], aug[static_cast<std::size_t>(piv)]);
      for (int i = 0; i < d; ++i)
        if (i != rank && ((aug[static_cast<std::size_t>(i)] >> bit) & 1u)) aug[static_cast<std::size_t>(i)] ^= aug[static_cast<std::size_t>(rank)];
      ++rank;
    }
    // aug[i] low part is e_i, high part records which columns combine to it:
    // e_i = sum_j c_j col_j  =>  inverse(e_i) = sum_j c_j e_j.
    BitMatrix inv(d);
    for (int i = 0; i < d; ++i) inv.cols_[static_cast<std::size_t>(i)] = static_cast<Word>(aug[static_cast<std::size_t>(i)] >> d);
    return inv;
  }

  Subspace image(const Subspace& s) const {
    Subspace out(dim_);
    for (Word r : s.rows()) out.insert(apply(r));
    return out;
  }

 private:
  int dim_ = 0;
  std::vector<Word> cols_;
};

}  // namespace asq
