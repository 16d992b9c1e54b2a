#include "asg/approx.hpp"

#include <limits>
#include <string>

#include "asg/error.hpp"

namespace asg {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

std::size_t saturating_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

void require_approx_shape(const GroupSubset& a) {
  if (a.empty() || !a.contains_identity()) throw Error(ErrorKind::MissingIdentity, "set does not contain the identity");
  if (!is_symmetric(a)) throw Error(ErrorKind::NotSymmetric, "set is not symmetric");
}

ApproximateSubgroup minimal_doubling(const GroupSubset& a, const SearchConfig& cfg) {
  require_approx_shape(a);
  auto cover = covering_number(set_product(a, a), a, cfg);
  return ApproximateSubgroup{a, cover.size, std::move(cover.translates)};
}

CommensurabilityCertificate commensurability(const ApproximateSubgroup& x, const ApproximateSubgroup& y,
                                             const SearchConfig& cfg) {
  require_same_group(x.carrier, y.carrier);
  auto forward = covering_number(x.carrier, y.carrier, cfg);
  auto backward = covering_number(y.carrier, x.carrier, cfg);
  return CommensurabilityCertificate{std::max(forward.size, backward.size), std::move(forward.translates),
                                     std::move(backward.translates)};
}

namespace {

[[noreturn]] void rethrow_for_member(const Error& e, std::size_t i) {
  throw Error(e.kind(), "member " + std::to_string(i) + ": " + e.what(), i);
}

}  // namespace

Family family_validate(const std::vector<GroupSubset>& sets, const SearchConfig& cfg) {
  if (sets.empty()) throw Error(ErrorKind::EmptyInput, "family is empty");
  Family f;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    try {
      require_same_group(sets.front(), sets[i]);
      f.members.push_back(minimal_doubling(sets[i], cfg));
    } catch (const LemmaViolation&) {
      throw;
    } catch (const Error& e) {
      rethrow_for_member(e, i);
    }
    f.k_uniform = std::max(f.k_uniform, f.members.back().doubling_k);
  }
  const std::size_t n = sets.size();
  f.pairwise.assign(n, std::vector<CommensurabilityCertificate>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      CommensurabilityCertificate c;
      try {
        c = commensurability(f.members[i], f.members[j], cfg);
      } catch (const Error& e) {
        throw Error(e.kind(), "pair (" + std::to_string(i) + "," + std::to_string(j) + "): " + e.what(), i);
      }
      f.pairwise[j][i] = CommensurabilityCertificate{c.n, c.z1, c.z0};
      f.pairwise[i][j] = std::move(c);
      f.n_uniform = std::max(f.n_uniform, f.pairwise[i][j].n);
    }
  }
  return f;
}

Family family_square(const Family& f, const SearchConfig& cfg) {
  std::vector<GroupSubset> squares;
  squares.reserve(f.size());
  for (const auto& m : f.members) squares.push_back(set_product(m.carrier, m.carrier));
  Family sq = family_validate(squares, cfg);
  const std::size_t k3 = saturating_pow(f.k_uniform, 3);
  const std::size_t nk = saturating_mul(f.n_uniform, f.k_uniform);
  if (sq.k_uniform > k3) {
    throw LemmaViolation("square-bounds", "K(X^2) = " + std::to_string(sq.k_uniform) + " exceeds K^3 = " +
                                              std::to_string(k3));
  }
  if (sq.n_uniform > nk) {
    throw LemmaViolation("square-bounds", "N(X^2) = " + std::to_string(sq.n_uniform) + " exceeds N*K = " +
                                              std::to_string(nk));
  }
  return sq;
}

ProductWitness product_commensurability_witness(const Family& f, const std::vector<std::size_t>& parts,
                                                std::size_t x, const SearchConfig& cfg) {
  if (parts.empty()) throw Error(ErrorKind::EmptyInput, "product needs at least one factor");
  for (std::size_t p : parts) {
    if (p >= f.size()) throw Error(ErrorKind::PreconditionFailed, "factor index out of range");
  }
  if (x >= f.size()) throw Error(ErrorKind::PreconditionFailed, "member index out of range");

  const std::size_t n = parts.size();
  const auto& target = f.members[x].carrier;
  ProductWitness w;
  w.product = f.members[parts[0]].carrier;
  for (std::size_t i = 1; i < n; ++i) w.product = set_product(w.product, f.members[parts[i]].carrier);

  // X_i ⊆ N_i X_{i+1} and X_{i+1} X_{i+1} ⊆ K_i X_{i+1}.
  w.forward = GroupSubset::identity_only(target.group());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    w.forward = set_product(w.forward, f.pairwise[parts[i]][parts[i + 1]].z0);
    w.forward = set_product(w.forward, f.members[parts[i + 1]].doubling_witness);
  }
  w.forward = set_product(w.forward, f.pairwise[parts[n - 1]][x].z0);
  // X ⊆ Z X_{p0} ⊆ Z T, since every other factor contains the identity.
  w.backward = f.pairwise[x][parts[0]].z0;

  w.bound = saturating_mul(saturating_pow(saturating_mul(f.n_uniform, f.k_uniform), n - 1), f.n_uniform);
  w.optimal_forward = covering_number(w.product, target, cfg).size;
  w.optimal_backward = minimum_cover(target, w.product, cfg).size;
  w.holds = w.forward.size() <= w.bound && w.backward.size() <= f.n_uniform &&
            w.product.subset_of(set_product(w.forward, target)) &&
            target.subset_of(set_product(w.backward, w.product)) && w.optimal_forward <= w.bound &&
            w.optimal_backward <= f.n_uniform;
  return w;
}

SquareIntersectionWitness xx_intersection_witness(const ApproximateSubgroup& x, const ApproximateSubgroup& y,
                                                  const CommensurabilityCertificate& cert) {
  require_same_group(x.carrier, y.carrier);
  SquareIntersectionWitness w;
  w.x0 = maximal_disjoint_family(x.carrier, y.carrier).centers;
  w.x1 = x.doubling_witness;
  w.e = set_product(w.x1, w.x0);
  w.bound = saturating_mul(x.doubling_k, cert.n);
  w.packing_ok = w.x0.size() <= cert.z0.size();
  w.size_ok = w.e.size() <= w.bound;
  const GroupSubset xx = set_product(x.carrier, x.carrier);
  const GroupSubset yy = set_product(y.carrier, y.carrier);
  w.containment_ok = xx.subset_of(set_product(w.e, xx & yy));
  return w;
}

void require_holds(const SquareIntersectionWitness& w) {
  if (!w.packing_ok) throw LemmaViolation("cover-packing", "maximal disjoint family exceeds the cover size");
  if (!w.size_ok) {
    throw LemmaViolation("square-intersection",
                         "|E| = " + std::to_string(w.e.size()) + " exceeds K*N = " + std::to_string(w.bound));
  }
  if (!w.containment_ok) throw LemmaViolation("square-intersection", "XX is not contained in E(XX ∩ YY)");
}

void require_holds(const ProductWitness& w) {
  if (!w.holds) {
    throw LemmaViolation("product-commensurability",
                         "product witness of size " + std::to_string(w.forward.size()) + "/" +
                             std::to_string(w.backward.size()) + " against bound " + std::to_string(w.bound));
  }
}

}  // namespace asg
