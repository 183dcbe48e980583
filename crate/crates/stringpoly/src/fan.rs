//! Integer fans, primitive collections, star subdivisions, divisors, and
//! basepoint-freeness certificates.
//!
//! Fans are stored through their maximal cones only (all fans here are
//! pure and simplicial); lower-dimensional cone queries reduce to subset
//! membership. Completeness is not verified algorithmically: the fans the
//! pipeline produces are complete by construction (Bott fans are, and star
//! subdivision preserves completeness).

use crate::linalg::{self, Q};
use crate::polytope::{Coords, HPolytope, HRow, RowTag};
use crate::{Error, Result};
use num_rational::BigRational;
use serde::Serialize;
use std::collections::BTreeSet;

/// A pure simplicial fan in Z^d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fan {
    pub d: usize,
    /// Primitive integer ray generators, pairwise distinct.
    pub rays: Vec<Vec<i64>>,
    /// Maximal cones as sorted ray-index sets.
    pub max_cones: Vec<Vec<usize>>,
}

/// Torus-invariant divisor: one integer coefficient per ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divisor {
    pub coeffs: Vec<i64>,
}

/// A primitive collection: a minimal non-face of the fan.
pub type PrimitiveCollection = BTreeSet<usize>;

impl Fan {
    pub fn new(d: usize, rays: Vec<Vec<i64>>, mut max_cones: Vec<Vec<usize>>) -> Fan {
        for c in &mut max_cones {
            c.sort_unstable();
        }
        max_cones.sort();
        debug_assert!(rays.iter().collect::<BTreeSet<_>>().len() == rays.len(), "rays must be distinct");
        Fan { d, rays, max_cones }
    }

    /// Is the set `s` of ray indices a cone of the fan (a face of some
    /// maximal cone)?
    pub fn is_cone(&self, s: &[usize]) -> bool {
        self.max_cones.iter().any(|c| s.iter().all(|i| c.binary_search(i).is_ok()))
    }

    /// All maximal cones are unimodular.
    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| {
            c.len() == self.d && {
                let m: Vec<Vec<i64>> = c.iter().map(|&i| self.rays[i].clone()).collect();
                linalg::det_i64(&m).abs() == 1
            }
        })
    }

    /// The sum of the ray generators of `tau`.
    pub fn ray_sum(&self, tau: &[usize]) -> Vec<i64> {
        let mut u = vec![0i64; self.d];
        for &i in tau {
            for (k, &x) in self.rays[i].iter().enumerate() {
                u[k] += x;
            }
        }
        u
    }
}

/// Primitive collections: minimal sets of rays spanning no cone, every
/// proper subset of which spans one. Computed definitionally as the
/// minimal hitting sets of the maximal-cone complements.
pub fn primitive_collections(fan: &Fan) -> Vec<PrimitiveCollection> {
    let nrays = fan.rays.len();
    // For each ray, the set of maximal cones NOT containing it, as a bitset.
    let words = fan.max_cones.len().div_ceil(64);
    let mut missing: Vec<Vec<u64>> = vec![vec![0u64; words]; nrays];
    for (ci, cone) in fan.max_cones.iter().enumerate() {
        let mut inside = vec![false; nrays];
        for &r in cone {
            inside[r] = true;
        }
        for r in 0..nrays {
            if !inside[r] {
                missing[r][ci / 64] |= 1 << (ci % 64);
            }
        }
    }
    // S is a non-face iff for every cone some element of S is missing,
    // i.e. union of `missing[r]` over r in S covers all cones.
    let full: Vec<u64> = {
        let mut v = vec![u64::MAX; words];
        let rem = fan.max_cones.len() % 64;
        if rem != 0 {
            v[words - 1] = (1u64 << rem) - 1;
        }
        v
    };
    let mut results: BTreeSet<PrimitiveCollection> = BTreeSet::new();
    // Depth-first: branch on the first uncovered cone's complement.
    fn rec(
        fan: &Fan,
        missing: &[Vec<u64>],
        full: &[u64],
        covered: Vec<u64>,
        chosen: &mut Vec<usize>,
        cap: usize,
        results: &mut BTreeSet<PrimitiveCollection>,
    ) {
        if covered == full {
            // hitting set; keep if minimal
            let minimal = chosen.iter().all(|&skip| {
                let mut cov = vec![0u64; full.len()];
                for &r in chosen.iter().filter(|&&r| r != skip) {
                    for (w, m) in cov.iter_mut().zip(&missing[r]) {
                        *w |= m;
                    }
                }
                cov != full
            });
            if minimal {
                results.insert(chosen.iter().copied().collect());
            }
            return;
        }
        if chosen.len() == cap {
            return;
        }
        // first uncovered cone
        let mut cone_idx = None;
        'find: for (w, (&c, &f)) in covered.iter().zip(full).enumerate() {
            let diff = f & !c;
            if diff != 0 {
                cone_idx = Some(w * 64 + diff.trailing_zeros() as usize);
                break 'find;
            }
        }
        let ci = cone_idx.unwrap();
        let cone = &fan.max_cones[ci];
        let inside: Vec<bool> = {
            let mut v = vec![false; missing.len()];
            for &r in cone {
                v[r] = true;
            }
            v
        };
        for r in 0..missing.len() {
            if inside[r] || chosen.contains(&r) {
                continue;
            }
            let mut cov = covered.clone();
            for (w, m) in cov.iter_mut().zip(&missing[r]) {
                *w |= m;
            }
            chosen.push(r);
            rec(fan, missing, full, cov, chosen, cap, results);
            chosen.pop();
        }
    }
    let mut chosen = Vec::new();
    rec(fan, &missing, &full, vec![0u64; words], &mut chosen, fan.d + 1, &mut results);
    results.into_iter().collect()
}

/// Star subdivision of the fan relative to the cone `tau` (given as ray
/// indices). The new ray is the sum of `tau`'s generators; every maximal
/// cone containing `tau` is replaced by the cones swapping one generator
/// of `tau` for the new ray.
pub fn star_subdivision(fan: &Fan, tau: &[usize]) -> Result<Fan> {
    let mut tau = tau.to_vec();
    tau.sort_unstable();
    if tau.is_empty() || !fan.is_cone(&tau) {
        return Err(Error::TauNotInFan);
    }
    for cone in &fan.max_cones {
        if tau.iter().all(|i| cone.binary_search(i).is_ok()) {
            let m: Vec<Vec<i64>> = cone.iter().map(|&i| fan.rays[i].clone()).collect();
            if cone.len() != fan.d || linalg::det_i64(&m).abs() != 1 {
                return Err(Error::NonSmoothStar);
            }
        }
    }
    let u_tau = fan.ray_sum(&tau);
    debug_assert!(!fan.rays.contains(&u_tau));
    let mut rays = fan.rays.clone();
    let new_idx = rays.len();
    rays.push(u_tau);
    let mut max_cones = Vec::with_capacity(fan.max_cones.len());
    for cone in &fan.max_cones {
        if tau.iter().all(|i| cone.binary_search(i).is_ok()) {
            for &drop in &tau {
                let mut c: Vec<usize> = cone.iter().copied().filter(|&i| i != drop).collect();
                c.push(new_idx);
                c.sort_unstable();
                max_cones.push(c);
            }
        } else {
            max_cones.push(cone.clone());
        }
    }
    Ok(Fan::new(fan.d, rays, max_cones))
}

/// Update the primitive collections across a star subdivision without
/// recomputing them: the generators of `tau` form a collection; old
/// collections not containing all of `tau` survive; and the minimal sets
/// `(P \ tau) ∪ {u_tau}` over old `P` meeting `tau` are added.
pub fn pc_after_star(fan: &Fan, pcs: &[PrimitiveCollection], tau: &[usize]) -> Result<Vec<PrimitiveCollection>> {
    let mut tau_sorted = tau.to_vec();
    tau_sorted.sort_unstable();
    if !fan.is_cone(&tau_sorted) {
        return Err(Error::TauNotInFan);
    }
    let new_idx = fan.rays.len();
    let g: PrimitiveCollection = tau_sorted.iter().copied().collect();
    let mut out: BTreeSet<PrimitiveCollection> = BTreeSet::new();
    out.insert(g.clone());
    for p in pcs {
        if !g.is_subset(p) {
            out.insert(p.clone());
        }
    }
    let candidates: Vec<PrimitiveCollection> = pcs
        .iter()
        .filter(|p| !p.is_disjoint(&g))
        .map(|p| {
            let mut s: PrimitiveCollection = p.difference(&g).copied().collect();
            s.insert(new_idx);
            s
        })
        .collect();
    for (i, c) in candidates.iter().enumerate() {
        let minimal = candidates.iter().enumerate().all(|(j, other)| j == i || !other.is_subset(c) || other == c);
        if minimal {
            out.insert(c.clone());
        }
    }
    Ok(out.into_iter().collect())
}

/// Expansion of `u` in the (unique) minimal cone of the fan containing it:
/// scans maximal cones and solves the simplicial coordinate system,
/// accepting on all-non-negative coordinates.
pub fn expand_in_fan(fan: &Fan, u: &[i64]) -> Result<Vec<(usize, Q)>> {
    for cone in &fan.max_cones {
        let m: Vec<Vec<i64>> = (0..fan.d).map(|row| cone.iter().map(|&i| fan.rays[i][row]).collect()).collect();
        let b: Vec<i64> = u.to_vec();
        if let Some(coeffs) = linalg::solve_square(&m, &b) {
            if coeffs.iter().all(|c| *c >= Q::from_integer(0)) {
                return Ok(cone
                    .iter()
                    .zip(coeffs)
                    .filter(|(_, c)| *c > Q::from_integer(0))
                    .map(|(&i, c)| (i, c))
                    .collect());
            }
        }
    }
    Err(Error::OutsideSupport)
}

/// Support function `φ_D(u)`: expand `u` over a containing cone and take
/// `-Σ c_ρ a_ρ`.
pub fn support_value(fan: &Fan, divisor: &Divisor, u: &[i64]) -> Result<BigRational> {
    let expansion = expand_in_fan(fan, u)?;
    let mut v = Q::from_integer(0);
    for (i, c) in expansion {
        v += c * Q::from_integer(-divisor.coeffs[i] as i128);
    }
    Ok(linalg::to_big(&v))
}

/// Cartier data: for each maximal cone the integer vector `m_σ` with
/// `⟨m_σ, u_ρ⟩ = -a_ρ` on the cone's rays.
pub fn cartier_data(fan: &Fan, divisor: &Divisor) -> Result<Vec<Vec<i64>>> {
    fan.max_cones
        .iter()
        .enumerate()
        .map(|(idx, cone)| {
            let a: Vec<Vec<i64>> = cone.iter().map(|&i| fan.rays[i].clone()).collect();
            let b: Vec<i64> = cone.iter().map(|&i| -divisor.coeffs[i]).collect();
            let x = linalg::solve_square(&a, &b).ok_or(Error::SingularCone(idx))?;
            x.into_iter()
                .map(|c| {
                    if c.is_integer() {
                        Ok(*c.numer() as i64)
                    } else {
                        Err(Error::SingularCone(idx))
                    }
                })
                .collect()
        })
        .collect()
}

/// The polytope `P_D = {m : ⟨m, u_ρ⟩ >= -a_ρ}` of a divisor on a complete
/// fan.
pub fn polytope_of_divisor(fan: &Fan, divisor: &Divisor, coords: Coords) -> HPolytope {
    HPolytope {
        coords,
        dim: fan.d,
        rows: fan
            .rays
            .iter()
            .enumerate()
            .map(|(i, u)| HRow { a: u.clone(), b: divisor.coeffs[i], tag: RowTag::Ray(i) })
            .collect(),
    }
}

/// A failed basepoint-freeness certificate: the violating primitive
/// collection with the two compared support-value breakdowns.
#[derive(Debug, Clone, Serialize)]
pub struct BpfViolation {
    pub collection: Vec<usize>,
    /// `φ_D(Σ x)` expanded along the containing cone, one addend per ray.
    #[serde(serialize_with = "ser_rationals")]
    pub lhs_terms: Vec<BigRational>,
    /// `φ_D(x)` per element of the collection.
    #[serde(serialize_with = "ser_rationals")]
    pub rhs_terms: Vec<BigRational>,
}

/// Rationals serialize as `"p/q"` strings (integers without the `/q`).
fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// All violations of the support-function basepoint-freeness criterion
/// `φ_D(Σ_{x∈P} x) >= Σ_{x∈P} φ_D(x)` over the given primitive
/// collections, ordered by (collection size, collection).
pub fn bpf_violations(fan: &Fan, divisor: &Divisor, pcs: &[PrimitiveCollection]) -> Result<Vec<BpfViolation>> {
    let mut sorted: Vec<&PrimitiveCollection> = pcs.iter().collect();
    sorted.sort_by_key(|p| (p.len(), (*p).clone()));
    let mut out = Vec::new();
    for p in sorted {
        let idxs: Vec<usize> = p.iter().copied().collect();
        let sum = fan.ray_sum(&idxs);
        let expansion = expand_in_fan(fan, &sum)?;
        let lhs_terms: Vec<BigRational> = expansion
            .iter()
            .map(|(i, c)| linalg::to_big(&(*c * Q::from_integer(-divisor.coeffs[*i] as i128))))
            .collect();
        let rhs_terms: Vec<BigRational> = idxs
            .iter()
            .map(|&i| linalg::to_big(&Q::from_integer(-divisor.coeffs[i] as i128)))
            .collect();
        let lhs: BigRational = lhs_terms.iter().sum();
        let rhs: BigRational = rhs_terms.iter().sum();
        if lhs < rhs {
            out.push(BpfViolation { collection: idxs, lhs_terms, rhs_terms });
        }
    }
    Ok(out)
}

/// Basepoint-freeness by the support-function criterion; on failure the
/// first violation (smallest collection) is reported.
pub fn is_basepoint_free(fan: &Fan, divisor: &Divisor, pcs: &[PrimitiveCollection]) -> Result<(bool, Option<BpfViolation>)> {
    let mut violations = bpf_violations(fan, divisor, pcs)?;
    if violations.is_empty() {
        Ok((true, None))
    } else {
        Ok((false, Some(violations.remove(0))))
    }
}

/// Basepoint-freeness by the Cartier-data criterion: `m_σ ∈ P_D` for all
/// maximal cones. Cross-check route for [`is_basepoint_free`].
pub fn is_basepoint_free_cartier(fan: &Fan, divisor: &Divisor) -> Result<bool> {
    let data = cartier_data(fan, divisor)?;
    Ok(data.iter().all(|m| {
        fan.rays
            .iter()
            .enumerate()
            .all(|(i, u)| m.iter().zip(u).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>() >= -(divisor.coeffs[i] as i128))
    }))
}

/// Build the fan of a Bott manifold from the column sets `[v]` and `[w]`:
/// `v` lower-triangular with all diagonal entries `-1`, `w`
/// lower-triangular with all diagonal entries `+1`. Rays are listed as
/// `v_1..v_n` then `w_1..w_n`; the `2^n` maximal cones pick `v_j` for
/// `j ∈ S` and `w_j` otherwise.
pub fn bott_fan(v_cols: &[Vec<i64>], w_cols: &[Vec<i64>]) -> Result<Fan> {
    let n = v_cols.len();
    if n == 0 || w_cols.len() != n {
        return Err(Error::NotBottData("column counts differ".into()));
    }
    if n > 16 {
        return Err(Error::DimensionCapExceeded { d: n, m: 1usize << 16 });
    }
    for (j, col) in v_cols.iter().enumerate() {
        if col.len() != n || col[j] != -1 || col[..j].iter().any(|&x| x != 0) {
            return Err(Error::NotBottData(format!("v column {} is not lower-triangular with diagonal -1", j + 1)));
        }
    }
    for (j, col) in w_cols.iter().enumerate() {
        if col.len() != n || col[j] != 1 || col[..j].iter().any(|&x| x != 0) {
            return Err(Error::NotBottData(format!("w column {} is not lower-triangular with diagonal +1", j + 1)));
        }
    }
    let mut rays: Vec<Vec<i64>> = Vec::with_capacity(2 * n);
    rays.extend(v_cols.iter().cloned());
    rays.extend(w_cols.iter().cloned());
    let mut max_cones = Vec::with_capacity(1 << n);
    for s in 0u64..(1u64 << n) {
        let cone: Vec<usize> = (0..n).map(|j| if s & (1 << j) != 0 { j } else { n + j }).collect();
        max_cones.push(cone);
    }
    Ok(Fan::new(n, rays, max_cones))
}

/// Structural fan validity check used by the test suite: maximal cones are
/// simplicial of full dimension, each facet is shared by exactly one other
/// maximal cone on the opposite side of the facet hyperplane, and a few
/// deterministic sample points lie in exactly one maximal cone.
pub fn validate_fan(fan: &Fan) -> bool {
    use std::collections::BTreeMap;
    for cone in &fan.max_cones {
        if cone.len() != fan.d {
            return false;
        }
        let m: Vec<Vec<i64>> = cone.iter().map(|&i| fan.rays[i].clone()).collect();
        if linalg::det_i64(&m) == 0 {
            return false;
        }
    }
    // facet pairing
    let mut facets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, cone) in fan.max_cones.iter().enumerate() {
        for skip in 0..cone.len() {
            let f: Vec<usize> = cone.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &r)| r).collect();
            facets.entry(f).or_default().push(ci);
        }
    }
    for (facet, cones) in &facets {
        if cones.len() != 2 {
            return false;
        }
        // the two opposite rays must lie strictly on opposite sides of the
        // facet hyperplane: solve the normal from the facet rays
        let opp: Vec<&Vec<i64>> = cones
            .iter()
            .map(|&ci| {
                let extra = fan.max_cones[ci].iter().find(|r| !facet.contains(r)).unwrap();
                &fan.rays[*extra]
            })
            .collect();
        // normal = kernel of facet-ray matrix; with d-1 independent rows,
        // compute via rank checks on both sides
        let mut rows: Vec<Vec<Q>> = facet
            .iter()
            .map(|&r| fan.rays[r].iter().map(|&x| Q::from_integer(x as i128)).collect())
            .collect();
        let base_rank = linalg::rank(&rows);
        if base_rank != fan.d - 1 {
            return false;
        }
        // opposite sides: the segment between the two opposite rays must
        // meet the facet hyperplane: rank([facet; o1]) = d and
        // rank([facet; o1 + o2 scaled]) — use a determinant sign test via
        // augmented ranks: o1, o2 dependent on facet+other means same side
        rows.push(opp[0].iter().map(|&x| Q::from_integer(x as i128)).collect());
        if linalg::rank(&rows) != fan.d {
            return false;
        }
        // sign test: express o2 = α o1 + facet-combination; need α < 0
        let mut mat: Vec<Vec<i64>> = facet.iter().map(|&r| fan.rays[r].clone()).collect();
        mat.push(opp[0].clone());
        // solve mat^T c = o2
        let a: Vec<Vec<i64>> = (0..fan.d).map(|row| mat.iter().map(|col| col[row]).collect()).collect();
        match linalg::solve_square(&a, opp[1]) {
            Some(c) => {
                if *c.last().unwrap() >= Q::from_integer(0) {
                    return false;
                }
            }
            None => return false,
        }
    }
    // deterministic sample points covered exactly once
    let samples: Vec<Vec<i64>> = (0..4)
        .map(|s| {
            (0..fan.d)
                .map(|i| {
                    let x = ((i as i64 + 1) * 97 + s * 31) % 13 - 6;
                    2 * x + 1
                })
                .collect()
        })
        .collect();
    for u in &samples {
        let mut hits = 0;
        for cone in &fan.max_cones {
            let m: Vec<Vec<i64>> = (0..fan.d).map(|row| cone.iter().map(|&i| fan.rays[i][row]).collect()).collect();
            if let Some(c) = linalg::solve_square(&m, u) {
                if c.iter().all(|x| *x >= Q::from_integer(0)) {
                    hits += 1;
                }
            }
        }
        if hits != 1 {
            return false;
        }
    }
    true
}

/// The Hirzebruch surface fan `H_k` (test fixture and worked example).
pub fn hirzebruch_fan(k: i64) -> Fan {
    Fan::new(
        2,
        vec![vec![-1, k], vec![0, -1], vec![1, 0], vec![0, 1]],
        vec![vec![2, 3], vec![1, 2], vec![0, 1], vec![0, 3]],
    )
}
