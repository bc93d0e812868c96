#pragma once

#include <array>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asq/as_search.hpp"
#include "asq/asconfig.hpp"
#include "asq/geometry.hpp"
#include "asq/group.hpp"
#include "asq/pseudoarc.hpp"
#include "asq/quadform.hpp"

namespace asq {

struct GeometrySummary {
  std::size_t points = 0;
  std::size_t lines = 0;
  GqResult gq;
  std::optional<SrgParams> srg;
};

inline GeometrySummary summarize(const IncidenceGeometry& geo) {
  GeometrySummary s;
  s.points = geo.num_points;
  s.lines = geo.num_lines();
  s.gq = verify_gq(geo);
  if (s.gq.ok) s.srg = collinearity_srg(geo);
  return s;
}

struct VerifyReport {
  Report axioms;
  Report lemma41;
  std::optional<PdsResult> pds;
  Report kantor;
  std::optional<GeometrySummary> as_geometry;
  std::optional<GeometrySummary> kantor_geometry;
  std::optional<bool> base_point_regular;
  std::size_t regular_points = 0;  // regular points of the Kantor quadrangle
  bool ok = false;
};

// Every check that applies to a configuration. Later stages run only when
// the configuration is valid.
inline VerifyReport verify_configuration(const ASConfiguration& cfg, bool all_points_regular = false) {
  VerifyReport r;
  r.axioms = check_as_axioms(cfg);
  if (!r.axioms.ok()) return r;
  const Group& g = *cfg.group;
  const std::size_t q = cfg.q;
  r.lemma41 = lemma41_invariants(cfg);
  r.pds = check_pds(g, delta(cfg));
  const KantorFamily fam = kantor_from_as(cfg);
  r.kantor = check_kantor(g, fam, q, q);
  r.as_geometry = summarize(as_quadrangle(cfg));
  if (r.kantor.ok()) {
    const IncidenceGeometry kg = kantor_quadrangle(g, fam, q, q);
    r.kantor_geometry = summarize(kg);
    if (r.kantor_geometry->gq.ok) {
      const std::size_t inf = kg.num_points - 1;
      r.base_point_regular = regular_point(kg, inf, r.kantor_geometry->gq.t);
      if (all_points_regular)
        for (std::size_t p = 0; p < kg.num_points; ++p) r.regular_points += regular_point(kg, p, r.kantor_geometry->gq.t) ? 1 : 0;
    }
  }
  const long sq = static_cast<long>(q);
  r.ok = r.lemma41.ok() && r.pds->ok && r.pds->lambda == sq - 2 && r.pds->mu == sq + 2 && r.kantor.ok() &&
         r.as_geometry->gq.ok && r.as_geometry->gq.s == sq - 1 && r.as_geometry->gq.t == sq + 1 && r.kantor_geometry &&
         r.kantor_geometry->gq.ok && r.kantor_geometry->gq.s == sq && r.kantor_geometry->gq.t == sq;
  return r;
}

// ---- demo objects --------------------------------------------------------------------

namespace gf4 {
inline unsigned mul(unsigned a, unsigned b) {
  unsigned r = 0;
  for (int i = 0; i < 2; ++i)
    if ((b >> i) & 1u) r ^= a << i;
  if (r & 4u) r ^= 0b111;
  return r & 3u;
}
}  // namespace gf4

// The hyperoval of PG(2, 4) made of the conic y^2 = xz and its nucleus,
// field-reduced to six subgroups of order 4 in C2^6 (coordinates x, y, z in
// bit pairs 0-1, 2-3, 4-5).
inline ASConfiguration as35_configuration(const Group& c2_6) {
  if (c2_6.order() != 64 || !c2_6.is_abelian() || exponent(c2_6) != 2)
    throw std::invalid_argument("as35: needs elementary abelian group of order 64 with xor encoding");
  std::vector<std::array<unsigned, 3>> pts;
  for (unsigned t = 0; t < 4; ++t) pts.push_back({1u, t, gf4::mul(t, t)});
  pts.push_back({0u, 0u, 1u});
  pts.push_back({0u, 1u, 0u});
  ASConfiguration cfg{&c2_6, 4, {}};
  for (auto [x, y, z] : pts) {
    std::vector<Elem> gens;
    for (unsigned lam : {1u, 2u}) gens.push_back(static_cast<Elem>(gf4::mul(lam, x) | (gf4::mul(lam, y) << 2) | (gf4::mul(lam, z) << 4)));
    cfg.U.push_back(Subgroup::generate(c2_6, gens));
  }
  return cfg;
}

struct FieldReductionReport {
  std::size_t planes = 0;
  bool singular = false;
  bool pseudo_arc = false;
  bool radical_meets_trivial = false;
  std::size_t radical_dim = 0;
  std::size_t equivalent_gammas = 0;  // nonzero gamma with Q_gamma equivalent to Q_1
  bool equivalent_to_deg_c4 = false;
  bool ok = false;
};

inline FieldReductionReport field_reduction_demo() {
  FieldReductionReport r;
  const FieldReductionArc arc = field_reduction_arc();
  r.planes = arc.planes8.size();
  r.singular = std::all_of(arc.planes8.begin(), arc.planes8.end(), [&](const Subspace& p) {
    return p.rank() == 3 && arc.form8.totally_singular(p);
  });
  r.pseudo_arc = is_partial_pseudo_arc(arc.form8, arc.planes8);
  r.radical_dim = static_cast<std::size_t>(arc.radical8.rank());
  r.radical_meets_trivial = std::all_of(arc.planes8.begin(), arc.planes8.end(),
                                        [&](const Subspace& p) { return meet(p, arc.radical8).rank() == 0; });
  const QuadraticForm q1 = reduced_conic_form(1);
  for (unsigned gamma = 1; gamma < 8; ++gamma)
    if (forms_equivalent(reduced_conic_form(gamma), q1)) ++r.equivalent_gammas;
  r.equivalent_to_deg_c4 = forms_equivalent(arc.form8, form_deg_c4()).has_value();
  r.ok = r.planes == 9 && r.singular && r.pseudo_arc && r.radical_meets_trivial && r.radical_dim == 2 &&
         r.equivalent_gammas == 7 && r.equivalent_to_deg_c4;
  return r;
}

// ---- arc pipelines --------------------------------------------------------------------

struct ArcPipeline {
  std::size_t planes = 0;
  std::uint64_t isometry_order = 0;
  std::vector<std::vector<Point>> seeds;
  std::uint64_t seed_nodes = 0;
  std::uint64_t raw = 0;
  std::vector<std::vector<Point>> arcs;
  std::vector<std::size_t> candidates;  // per arc, when lifted
  std::size_t families = 0;
  std::uint64_t backtrack_nodes = 0;
  bool revalidated = true;  // every seed and arc passed is_partial_pseudo_arc
  double seconds = 0;
};

// Seeds of the given size up to isometry, their completions to `target`
// planes, and (when `lift_into` is set) the AS search over each arc's lifts.
inline ArcPipeline arc_pipeline(const QuadraticForm& form, std::size_t seed_size, std::size_t target, unsigned threads,
                                const Group* lift_into = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  ArcPipeline r;
  PlaneCatalogue cat(form, 3);
  r.planes = cat.size();
  ArcSymmetry sym = make_arc_symmetry(cat);
  r.isometry_order = sym.order;
  SearchTrace tr;
  r.seeds = arc_seeds(cat, *sym.canon, seed_size, threads, &tr);
  r.seed_nodes = tr.nodes;
  const ArcExtension ext = extend_arcs(cat, sym.canon.get(), r.seeds, target, threads);
  r.raw = ext.raw;
  r.arcs = ext.arcs;
  auto planes_of = [&](const std::vector<Point>& s) {
    std::vector<Subspace> out;
    for (Point p : s) out.push_back(cat.plane(p));
    return out;
  };
  for (const auto& s : r.seeds) r.revalidated = r.revalidated && is_partial_pseudo_arc(form, planes_of(s));
  for (const auto& a : r.arcs) r.revalidated = r.revalidated && is_partial_pseudo_arc(form, planes_of(a));
  if (lift_into) {
    const std::size_t q = cube_root(lift_into->order());
    for (const auto& a : r.arcs) {
      const LiftedArc l = lift_arc(*lift_into, planes_of(a));
      r.candidates.push_back(l.candidates.size());
      BacktrackOptions opt;
      opt.threads = threads;
      const BacktrackResult b = as_backtrack(*lift_into, l.candidates, q + 1, opt);
      r.families += b.families.size();
      r.backtrack_nodes += b.nodes;
      for (const auto& f : b.families) {
        std::vector<Subgroup> fam;
        for (std::size_t i : f) fam.push_back(l.candidates[i]);
        r.revalidated = r.revalidated && as2_all_orientations(fam);
      }
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace asq
