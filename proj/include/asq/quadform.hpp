#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "asq/gf2.hpp"

namespace asq {

// Quadratic form Q(x) = x^T M x over GF(2) with M upper triangular.
// B(u, v) = u^T (M + M^T) v is its polarisation.
class QuadraticForm {
 public:
  QuadraticForm() = default;

  // upper[i] bit j (j >= i) is the coefficient of x_i x_j; bits below i are ignored.
  QuadraticForm(int d, std::vector<Word> upper) : dim_(d), upper_(std::move(upper)) {
    check_dim(d);
    if (static_cast<int>(upper_.size()) != d) throw std::invalid_argument("quadform: need d coefficient rows");
    for (int i = 0; i < d; ++i) {
      const Word mask = (d == 32 ? ~Word{0} : ((Word{1} << d) - 1)) & ~((Word{1} << i) - 1);
      upper_[static_cast<std::size_t>(i)] &= mask;
    }
    sym_.assign(static_cast<std::size_t>(d), 0);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if ((upper_[static_cast<std::size_t>(i)] >> j) & 1u) {
          sym_[static_cast<std::size_t>(i)] |= Word{1} << j;
          sym_[static_cast<std::size_t>(j)] |= Word{1} << i;
        }
  }

  static QuadraticForm zero(int d) { return QuadraticForm(d, std::vector<Word>(static_cast<std::size_t>(d), 0)); }

  // Monomials x_i x_j with 1-based indices; (i, i) is the square term.
  static QuadraticForm from_terms(int d, std::initializer_list<std::pair<int, int>> terms) {
    std::vector<Word> up(static_cast<std::size_t>(d), 0);
    for (auto [a, b] : terms) {
      if (a < 1 || b < 1 || a > d || b > d) throw std::invalid_argument("quadform: monomial index out of range");
      const int i = std::min(a, b) - 1, j = std::max(a, b) - 1;
      up[static_cast<std::size_t>(i)] ^= Word{1} << j;
    }
    return QuadraticForm(d, std::move(up));
  }

  // Recovers M from a function assumed quadratic; throws if it is not.
  static QuadraticForm from_function(int d, const std::function<int(Word)>& f) {
    check_dim(d);
    if (f(0) != 0) throw std::invalid_argument("quadform: function is nonzero at 0");
    std::vector<Word> up(static_cast<std::size_t>(d), 0);
    for (int i = 0; i < d; ++i) {
      const Word ei = Word{1} << i;
      if (f(ei) & 1) up[static_cast<std::size_t>(i)] |= ei;
      for (int j = i + 1; j < d; ++j) {
        const Word ej = Word{1} << j;
        if ((f(ei ^ ej) ^ f(ei) ^ f(ej)) & 1) up[static_cast<std::size_t>(i)] |= ej;
      }
    }
    QuadraticForm q(d, std::move(up));
    for (Word x = 0; x < (Word{1} << d); ++x)
      if (q.evaluate(x) != (f(x) & 1)) throw std::invalid_argument("quadform: function is not a quadratic form");
    return q;
  }

  int dim() const { return dim_; }
  const std::vector<Word>& upper() const { return upper_; }

  int evaluate(Word x) const {
    int r = 0;
    for (Word w = x; w; w &= w - 1) r ^= parity(upper_[static_cast<std::size_t>(lowest_bit(w))] & x);
    return r;
  }
  int evaluate(const BitVector& v) const {
    if (v.dim != dim_) throw std::invalid_argument("quadform: dimension mismatch");
    return evaluate(v.bits);
  }

  int bilinear(Word u, Word v) const {
    int r = 0;
    for (Word w = u; w; w &= w - 1) r ^= parity(sym_[static_cast<std::size_t>(lowest_bit(w))] & v);
    return r;
  }
  int bilinear(const BitVector& u, const BitVector& v) const {
    if (u.dim != dim_ || v.dim != dim_) throw std::invalid_argument("quadform: dimension mismatch");
    return bilinear(u.bits, v.bits);
  }

  // Row i of M + M^T: the functional B(e_i, .).
  Word polar_row(int i) const { return sym_[static_cast<std::size_t>(i)]; }

  // B(x, .) as a bit mask of coefficients.
  Word polar(Word x) const {
    Word r = 0;
    for (Word w = x; w; w &= w - 1) r ^= sym_[static_cast<std::size_t>(lowest_bit(w))];
    return r;
  }

  bool totally_singular(const Subspace& s) const {
    const auto& r = s.rows();
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (evaluate(r[i])) return false;
      for (std::size_t j = i + 1; j < r.size(); ++j)
        if (bilinear(r[i], r[j])) return false;
    }
    return true;
  }

  // Q(g x) as a new form.
  QuadraticForm pullback(const BitMatrix& g) const {
    return from_function(dim_, [&](Word x) { return evaluate(g.apply(x)); });
  }

  bool preserved_by(const BitMatrix& g) const {
    for (Word x = 0; x < (Word{1} << dim_); ++x)
      if (evaluate(g.apply(x)) != evaluate(x)) return false;
    return true;
  }

  friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;

 private:
  int dim_ = 0;
  std::vector<Word> upper_;
  std::vector<Word> sym_;
};

// Kernel of the linear map x -> (parity(rows[i] & x))_i on GF(2)^d.
inline Subspace kernel(int d, const std::vector<Word>& rows) {
  Subspace rs = Subspace::from_words(d, rows);
  const Word piv = rs.pivot_mask();
  Subspace ker(d);
  for (int f = 0; f < d; ++f) {
    if ((piv >> f) & 1u) continue;
    Word x = Word{1} << f;
    for (Word r : rs.rows())
      if ((r >> f) & 1u) x |= Word{1} << lowest_bit(r);
    ker.insert(x);
  }
  return ker;
}

// Vectors e_j for the non-pivot columns of s: a complement of s.
inline Subspace standard_complement(const Subspace& s) {
  Subspace c(s.ambient_dim());
  const Word piv = s.pivot_mask();
  for (int j = 0; j < s.ambient_dim(); ++j)
    if (!((piv >> j) & 1u)) c.insert(Word{1} << j);
  return c;
}

// {x : B(x, s) = 0}
inline Subspace perp(const QuadraticForm& q, const Subspace& s) {
  std::vector<Word> rows;
  for (Word r : s.rows()) rows.push_back(q.polar(r));
  return kernel(q.dim(), rows);
}

enum class WittType { plus, minus };

struct FormClass {
  enum class Tag { hyperbolic, elliptic, degenerate };
  Tag tag = Tag::hyperbolic;
  WittType induced = WittType::plus;  // type of Q on the standard complement of Rad(B)
  int rad_dim = 0;
  int srad_dim = 0;

  friend bool operator==(const FormClass&, const FormClass&) = default;
};

inline const char* to_string(FormClass::Tag t) {
  switch (t) {
    case FormClass::Tag::hyperbolic: return "hyperbolic";
    case FormClass::Tag::elliptic: return "elliptic";
    case FormClass::Tag::degenerate: return "degenerate";
  }
  return "?";
}

struct Radicals {
  Subspace rad;
  Subspace srad;
  FormClass cls;
};

// Witt type of a nondegenerate form restricted to the span of `basis`
// (dimension 2m), decided by counting zeros: plus iff 2^(2m-1) + 2^(m-1).
inline WittType witt_type_by_zero_count(const QuadraticForm& q, const Subspace& basis) {
  const int n = basis.rank();
  if (n == 0) return WittType::plus;
  std::uint64_t zeros = 0;
  for (Word x : basis.elements())
    if (q.evaluate(x) == 0) ++zeros;
  const int m = n / 2;
  const std::uint64_t plus = (std::uint64_t{1} << (n - 1)) + (std::uint64_t{1} << (m - 1));
  return zeros == plus ? WittType::plus : WittType::minus;
}

inline Radicals radicals(const QuadraticForm& q) {
  const int d = q.dim();
  std::vector<Word> rows(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) rows[static_cast<std::size_t>(i)] = q.polar_row(i);
  Radicals out;
  out.rad = kernel(d, rows);
  // Q is additive on Rad(B), so SRad is the kernel of a linear functional there.
  out.srad = Subspace(d);
  std::optional<Word> anisotropic;
  for (Word r : out.rad.rows())
    if (q.evaluate(r)) {
      anisotropic = r;
      break;
    }
  for (Word r : out.rad.rows()) out.srad.insert(q.evaluate(r) && anisotropic ? r ^ *anisotropic : r);
  out.cls.rad_dim = out.rad.rank();
  out.cls.srad_dim = out.srad.rank();
  out.cls.induced = witt_type_by_zero_count(q, standard_complement(out.rad));
  if (out.cls.rad_dim > 0)
    out.cls.tag = FormClass::Tag::degenerate;
  else
    out.cls.tag = out.cls.induced == WittType::plus ? FormClass::Tag::hyperbolic : FormClass::Tag::elliptic;
  return out;
}

// All totally singular k-subspaces in canonical (Subspace) order, built by
// extending singular points inside perps.
inline std::vector<Subspace> singular_subspaces(const QuadraticForm& q, int k) {
  const int d = q.dim();
  if (k < 0 || k > d) throw std::invalid_argument("quadform: subspace dimension out of range");
  if (k == 0) return {Subspace(d)};
  std::vector<Word> singular;
  for (Word x = 1; x < (Word{1} << d); ++x)
    if (q.evaluate(x) == 0) singular.push_back(x);
  std::set<Subspace> level;
  for (Word x : singular) level.insert(Subspace::from_words(d, {x}));
  for (int j = 1; j < k; ++j) {
    std::set<Subspace> next;
    for (const Subspace& w : level) {
      const Subspace wp = perp(q, w);
      for (Word x : singular) {
        if (!wp.contains(x) || w.contains(x)) continue;
        Subspace ext = w;
        ext.insert(x);
        next.insert(std::move(ext));
      }
    }
    level = std::move(next);
  }
  return {level.begin(), level.end()};
}

// x -> x + B(x, v) v
inline BitMatrix orthogonal_transvection(const QuadraticForm& q, Word v) {
  std::vector<Word> cols(static_cast<std::size_t>(q.dim()));
  for (int j = 0; j < q.dim(); ++j) {
    const Word e = Word{1} << j;
    cols[static_cast<std::size_t>(j)] = q.bilinear(e, v) ? e ^ v : e;
  }
  return BitMatrix::from_columns(std::move(cols));
}

// Normal-form basis: columns are hyperbolic pairs (e_i, f_i), possibly a final
// elliptic pair, then an anisotropic radical vector if Q is nonzero on Rad,
// then a basis of SRad. In these coordinates Q takes a form determined by
// (d, pairs, elliptic, anisotropic radical, srad_dim).
struct NormalForm {
  BitMatrix basis;
  int pairs = 0;
  bool elliptic = false;
  bool anisotropic_radical = false;
  int srad_dim = 0;

  bool same_invariants(const NormalForm& o) const {
    return basis.dim() == o.basis.dim() && pairs == o.pairs && elliptic == o.elliptic &&
           anisotropic_radical == o.anisotropic_radical && srad_dim == o.srad_dim;
  }
};

inline NormalForm normal_form(const QuadraticForm& q) {
  const int d = q.dim();
  const Radicals r = radicals(q);
  NormalForm nf;
  std::vector<Word> cols;
  // Work inside the standard complement of Rad, which is nondegenerate for B.
  std::vector<Word> remaining = standard_complement(r.rad).rows();
  std::vector<std::pair<Word, Word>> pairs;
  while (!remaining.empty()) {
    const Subspace rem = Subspace::from_words(d, remaining);
    std::optional<Word> e;
    for (Word x : rem.elements())
      if (x != 0 && q.evaluate(x) == 0) {
        e = x;
        break;
      }
    Word ev = e ? *e : rem.rows().front();
    Word fv = 0;
    for (Word x : rem.rows())
      if (q.bilinear(ev, x)) {
        fv = x;
        break;
      }
    if (fv == 0) throw std::logic_error("quadform: complement of radical is degenerate");
    if (e && q.evaluate(fv)) fv ^= ev;  // make f singular too
    pairs.emplace_back(ev, fv);
    std::vector<Word> next;
    for (Word w : rem.rows()) {
      Word p = w;
      if (q.bilinear(p, fv)) p ^= ev;
      if (q.bilinear(w, ev)) p ^= fv;
      next.push_back(p);
    }
    Subspace ns = Subspace::from_words(d, next);
    remaining = ns.rows();
    if (!e) {
      nf.elliptic = true;
      if (!remaining.empty()) throw std::logic_error("quadform: elliptic pair found before the last step");
    }
  }
  std::optional<Word> aniso;
  for (Word x : r.rad.rows())
    if (q.evaluate(x)) {
      aniso = x;
      break;
    }
  if (nf.elliptic && aniso) {
    // An anisotropic radical vector turns the last elliptic pair hyperbolic.
    auto& [ev, fv] = pairs.back();
    ev ^= *aniso;
    fv ^= ev;
    nf.elliptic = false;
  }
  for (auto [ev, fv] : pairs) {
    cols.push_back(ev);
    cols.push_back(fv);
  }
  if (aniso) {
    nf.anisotropic_radical = true;
    cols.push_back(*aniso);
  }
  for (Word s : r.srad.rows()) cols.push_back(s);
  nf.pairs = static_cast<int>(pairs.size());
  nf.srad_dim = r.srad.rank();
  nf.basis = BitMatrix::from_columns(std::move(cols));
  return nf;
}

// Generators of the full stabiliser of Q in GL(d, 2).
// Transvections generate the isometries of Q modulo SRad(Q); the rest is
// GL(SRad) acting on a fixed complement and the shears x -> x + phi(x) with
// phi : complement -> SRad. When Q is nonzero on Rad(B) the complement
// includes one radical vector with Q = 1.
inline std::vector<BitMatrix> isometry_generators(const QuadraticForm& q) {
  const int d = q.dim();
  const Radicals r = radicals(q);
  std::vector<BitMatrix> gens;
  for (Word v = 1; v < (Word{1} << d); ++v) {
    if (q.evaluate(v) != 1) continue;
    gens.push_back(orthogonal_transvection(q, v));
  }
  // Transvections miss half of O+(4, 2); exchanging the first two hyperbolic
  // pairs of a normal-form basis supplies the missing coset.
  if (const NormalForm nf = normal_form(q); nf.pairs >= 2 && !(nf.pairs == 2 && nf.elliptic)) {
    const BitMatrix& b = nf.basis;
    std::vector<Word> cols(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) cols[static_cast<std::size_t>(j)] = Word{1} << j;
    std::swap(cols[0], cols[2]);
    std::swap(cols[1], cols[3]);
    gens.push_back(b * BitMatrix::from_columns(std::move(cols)) * b.inverse());
  }
  if (r.srad.rank() == 0) return gens;
  const auto& rb = r.srad.rows();
  std::vector<Word> cb = standard_complement(r.rad).rows();
  for (Word x : r.rad.rows())
    if (q.evaluate(x)) {
      cb.push_back(x);
      break;
    }
  // Express a vector as complement part + radical coordinates.
  auto build = [&](const std::function<Word(Word)>& on_basis) {
    // on_basis maps each vector of the basis cb ++ rb; extend linearly.
    std::vector<Word> basis(cb.begin(), cb.end());
    basis.insert(basis.end(), rb.begin(), rb.end());
    std::vector<Word> images;
    for (Word b : basis) images.push_back(on_basis(b));
    // change of basis: columns in the standard basis
    BitMatrix from_basis = BitMatrix::from_columns(basis);
    BitMatrix to_basis = from_basis.inverse();
    std::vector<Word> cols(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      Word coords = to_basis.apply(Word{1} << j);
      Word img = 0;
      for (Word c = coords; c; c &= c - 1) img ^= images[static_cast<std::size_t>(lowest_bit(c))];
      cols[static_cast<std::size_t>(j)] = img;
    }
    return BitMatrix::from_columns(std::move(cols));
  };
  const std::size_t nr = rb.size();
  // elementary transvections of GL(Rad): r_a -> r_a + r_b
  for (std::size_t a = 0; a < nr; ++a)
    for (std::size_t b = 0; b < nr; ++b) {
      if (a == b) continue;
      gens.push_back(build([&](Word x) { return x == rb[a] ? x ^ rb[b] : x; }));
    }
  // shears c_j -> c_j + r_i
  for (Word c : cb)
    for (Word rr : rb) gens.push_back(build([&](Word x) { return x == c ? x ^ rr : x; }));
  return gens;
}

// Returns g with Q2(x) = Q1(g x) for all x, or nothing when inequivalent.
inline std::optional<BitMatrix> forms_equivalent(const QuadraticForm& q1, const QuadraticForm& q2) {
  if (q1.dim() != q2.dim()) throw std::invalid_argument("quadform: equivalence needs equal dimensions");
  const NormalForm a = normal_form(q1), b = normal_form(q2);
  if (!a.same_invariants(b)) return std::nullopt;
  BitMatrix g = a.basis * b.basis.inverse();
  for (Word x = 0; x < (Word{1} << q1.dim()); ++x)
    if (q1.evaluate(g.apply(x)) != q2.evaluate(x)) throw std::logic_error("quadform: normal form witness failed");
  return g;
}

// Named presets used throughout.
inline QuadraticForm form_plus8() { return QuadraticForm::from_terms(8, {{1, 2}, {3, 4}, {5, 6}, {7, 8}}); }
inline QuadraticForm form_minus8() {
  return QuadraticForm::from_terms(8, {{1, 2}, {3, 4}, {5, 6}, {7, 7}, {7, 8}, {8, 8}});
}
inline QuadraticForm form_deg_hyp6() { return QuadraticForm::from_terms(8, {{1, 2}, {3, 4}, {5, 6}}); }
inline QuadraticForm form_deg_c4() { return QuadraticForm::from_terms(8, {{1, 2}, {3, 4}, {5, 6}, {7, 7}}); }

inline QuadraticForm form_preset(const std::string& name) {
  if (name == "plus8") return form_plus8();
  if (name == "minus8") return form_minus8();
  if (name == "deg-hyp6") return form_deg_hyp6();
  if (name == "deg-c4") return form_deg_c4();
  throw std::invalid_argument("quadform: unknown preset '" + name + "'");
}

// "dim d" then d rows of d bits (row i, column j = coefficient of x_i x_j).
inline QuadraticForm parse_form(const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  int d = 0;
  if (!(is >> tag >> d) || tag != "dim") throw std::invalid_argument("form file line 1: expected 'dim <d>'");
  check_dim(d);
  std::vector<Word> up(static_cast<std::size_t>(d), 0);
  for (int i = 0; i < d; ++i) {
    std::string row;
    if (!(is >> row) || static_cast<int>(row.size()) != d)
      throw std::invalid_argument("form file line " + std::to_string(i + 2) + ": expected " + std::to_string(d) + " bits");
    for (int j = 0; j < d; ++j) {
      if (row[static_cast<std::size_t>(j)] != '0' && row[static_cast<std::size_t>(j)] != '1')
        throw std::invalid_argument("form file line " + std::to_string(i + 2) + ": bad bit");
      if (j >= i && row[static_cast<std::size_t>(j)] == '1') up[static_cast<std::size_t>(i)] |= Word{1} << j;
    }
  }
  return QuadraticForm(d, std::move(up));
}

inline std::string format_form(const QuadraticForm& q) {
  std::ostringstream os;
  os << "dim " << q.dim() << '\n';
  for (int i = 0; i < q.dim(); ++i) {
    for (int j = 0; j < q.dim(); ++j) os << (((q.upper()[static_cast<std::size_t>(i)] >> j) & 1u) ? '1' : '0');
    os << '\n';
  }
  return os.str();
}

// GF(8) = GF(2)[a]/(a^3 + a + 1), elements as 3-bit polynomials in a.
namespace gf8 {

inline unsigned mul(unsigned x, unsigned y) {
  unsigned r = 0;
  for (int i = 0; i < 3; ++i)
    if ((y >> i) & 1u) r ^= x << i;
  for (int b = 4; b >= 3; --b)
    if ((r >> b) & 1u) r ^= 0b1011u << (b - 3);
  return r & 7u;
}

inline unsigned pow(unsigned x, unsigned e) {
  unsigned r = 1;
  while (e--) r = mul(r, x);
  return r;
}

// beta + beta^2 + beta^4, always 0 or 1
inline unsigned trace(unsigned b) {
  const unsigned b2 = mul(b, b), b4 = mul(b2, b2);
  return b ^ b2 ^ b4;
}

inline constexpr unsigned alpha = 0b010;

}  // namespace gf8

struct FieldReductionArc {
  QuadraticForm form9;             // T(xy + z^2) on GF(2)^9
  std::vector<Subspace> planes9;   // images of the nine conic points
  Word quotient_point = 0;         // P in SRad(form9)
  QuadraticForm form8;             // induced form on GF(2)^9 / P
  std::vector<Subspace> planes8;
  Subspace radical8;               // Rad(form8), the plane pi_0
};

// Coordinates on GF(2)^9: bits 0-2 hold x, 3-5 hold y, 6-8 hold z, each in the
// basis 1, a, a^2.
inline Word pack_gf8_triple(unsigned x, unsigned y, unsigned z) { return Word{x} | (Word{y} << 3) | (Word{z} << 6); }

inline QuadraticForm reduced_conic_form(unsigned gamma) {
  return QuadraticForm::from_function(9, [gamma](Word v) {
    const unsigned x = v & 7u, y = (v >> 3) & 7u, z = (v >> 6) & 7u;
    return static_cast<int>(gf8::trace(gf8::mul(gamma, gf8::mul(x, y) ^ gf8::mul(z, z))));
  });
}

// The conic xy = z^2 of PG(2, 8) has points (1, t^2, t) and (0, 1, 0); its
// nucleus (0, 0, 1) spans the radical. Field reduction sends each point to a
// totally singular plane of GF(2)^9; quotienting by the singular radical
// point (0, 0, a) lands in GF(2)^8.
inline FieldReductionArc field_reduction_arc() {
  FieldReductionArc out;
  out.form9 = reduced_conic_form(1);
  std::vector<std::array<unsigned, 3>> points;
  for (unsigned t = 0; t < 8; ++t) points.push_back({1u, gf8::mul(t, t), t});
  points.push_back({0u, 1u, 0u});
  for (auto [x, y, z] : points) {
    Subspace p(9);
    for (unsigned lam : {1u, gf8::alpha, gf8::mul(gf8::alpha, gf8::alpha)})
      p.insert(pack_gf8_triple(gf8::mul(lam, x), gf8::mul(lam, y), gf8::mul(lam, z)));
    out.planes9.push_back(p);
  }
  out.quotient_point = pack_gf8_triple(0, 0, gf8::alpha);  // bit 7
  const int drop = lowest_bit(out.quotient_point);
  auto project = [drop](Word v) {
    const Word lowm = (Word{1} << drop) - 1;
    return (v & lowm) | ((v >> (drop + 1)) << drop);
  };
  // P is singular and radical, so Q(v + P) = Q(v): the induced form is Q on
  // vectors with a zero in the dropped coordinate.
  const QuadraticForm& q9 = out.form9;
  out.form8 = QuadraticForm::from_function(8, [&](Word w) {
    const Word lowm = (Word{1} << drop) - 1;
    const Word v = (w & lowm) | ((w >> drop) << (drop + 1));
    return q9.evaluate(v);
  });
  for (const auto& p : out.planes9) {
    Subspace img(8);
    for (Word r : p.rows()) img.insert(project(r));
    out.planes8.push_back(img);
  }
  out.radical8 = radicals(out.form8).rad;
  return out;
}

}  // namespace asq
