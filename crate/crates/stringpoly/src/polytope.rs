//! String cones, λ-cones, string polytopes, and exact polytope machinery.
//!
//! H-representations are stored as integer rows `a·x + b >= 0` with a
//! coordinate-system tag: `t` (node variables) or `m` (chamber variables).
//! Vertices are exact rationals obtained by solving every full-rank tight
//! row subset; everything downstream (integrality, reflexivity, lattice
//! points) works on those exact values.

use crate::linalg::{self, Q};
use crate::weyl::ReducedWord;
use crate::wiring::{enumerate_rigorous_paths, WiringDiagram};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

/// Coordinate system of an H-representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coords {
    #[serde(rename = "t")]
    T,
    #[serde(rename = "m")]
    M,
}

/// Row provenance; serializes as `"path:l1->l3->l2"`, `"node:4"`, `"ray:0"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowTag {
    /// String inequality of a rigorous path (wire expression).
    Path(String),
    /// λ-inequality of a node.
    Node(usize),
    /// Fan ray index (for divisor polytopes).
    Ray(usize),
}

impl Serialize for RowTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text = match self {
            RowTag::Path(e) => format!("path:{e}"),
            RowTag::Node(j) => format!("node:{j}"),
            RowTag::Ray(i) => format!("ray:{i}"),
        };
        s.serialize_str(&text)
    }
}

/// One inequality `a·x + b >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HRow {
    pub a: Vec<i64>,
    pub b: i64,
    pub tag: RowTag,
}

/// Exact-rational H-representation `A x + b >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HPolytope {
    pub coords: Coords,
    pub dim: usize,
    pub rows: Vec<HRow>,
}

/// Caps for the exhaustive vertex enumeration.
pub const VERTEX_DIM_CAP: usize = 16;
pub const VERTEX_ROW_CAP: usize = 64;
/// Cap on lattice-point box scans.
pub const BOX_CAP: u64 = 10_000_000;

/// Exact vertex set.
#[derive(Debug, Clone)]
pub struct VertexSet {
    pub vertices: Vec<Vec<BigRational>>,
    pub integral: bool,
}

/// Weight vector λ = λ_1 ϖ_1 + ... + λ_n ϖ_n with non-negative entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn is_regular(&self) -> bool {
        self.0.iter().all(|&x| x > 0)
    }

    pub fn parse(s: &str) -> Result<WeightVector> {
        let entries: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("bad weight {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        Ok(WeightVector(entries))
    }

    /// The involution-image weight (entries reversed).
    pub fn reversed(&self) -> WeightVector {
        WeightVector(self.0.iter().rev().copied().collect())
    }
}

/// The string cone of a word: one row per rigorous path, `b = 0`.
pub fn string_cone(word: &ReducedWord, coords: Coords) -> HPolytope {
    let diagram = WiringDiagram::build(word);
    string_cone_with(&diagram, &enumerate_rigorous_paths(&diagram), coords)
}

pub(crate) fn string_cone_with(diagram: &WiringDiagram, paths: &[crate::wiring::RigorousPath], coords: Coords) -> HPolytope {
    let rows = paths
        .iter()
        .map(|p| HRow {
            a: match coords {
                Coords::M => p.w_m.clone(),
                Coords::T => p.w_t.clone(),
            },
            b: 0,
            tag: RowTag::Path(p.expression()),
        })
        .collect();
    HPolytope { coords, dim: diagram.nbar, rows }
}

/// The λ-inequality coefficient vector `v_j` in chamber coordinates.
pub fn lambda_row_m(word: &ReducedWord, j: usize) -> Vec<i64> {
    let letters = word.letters();
    (1..=letters.len())
        .map(|k| if k >= j && letters[k - 1] == letters[j - 1] { -1 } else { 0 })
        .collect()
}

/// The λ-cone: `nbar` rows. In `m` coordinates row `j` is
/// `-Σ_{k >= j, i_k = i_j} m_k + λ_{i_j} >= 0`; in `t` coordinates it is
/// `-t_j + Σ_{k > j} b_k t_k + λ_{i_j} >= 0` with `b_k` determined by the
/// column distance (`-2` same column, `1` adjacent, `0` otherwise).
pub fn lambda_cone(word: &ReducedWord, lambda: &WeightVector, coords: Coords) -> Result<HPolytope> {
    let n = word.rank();
    if lambda.0.len() != n {
        return Err(Error::BadWeightLength { got: lambda.0.len(), want: n });
    }
    let letters = word.letters();
    let nbar = letters.len();
    let rows = (1..=nbar)
        .map(|j| {
            let a = match coords {
                Coords::M => lambda_row_m(word, j),
                Coords::T => {
                    let mut a = vec![0i64; nbar];
                    a[j - 1] = -1;
                    for k in j + 1..=nbar {
                        a[k - 1] = match letters[k - 1].abs_diff(letters[j - 1]) {
                            0 => -2,
                            1 => 1,
                            _ => 0,
                        };
                    }
                    a
                }
            };
            HRow { a, b: lambda.0[letters[j - 1] - 1], tag: RowTag::Node(j) }
        })
        .collect();
    Ok(HPolytope { coords, dim: nbar, rows })
}

/// The string polytope: string-cone rows followed by λ-cone rows.
pub fn string_polytope(word: &ReducedWord, lambda: &WeightVector, coords: Coords) -> Result<HPolytope> {
    let mut p = string_cone(word, coords);
    p.rows.extend(lambda_cone(word, lambda, coords)?.rows);
    Ok(p)
}

fn dot_q(a: &[i64], x: &[Q]) -> Q {
    a.iter().zip(x).map(|(&c, xi)| Q::from_integer(c as i128) * xi).sum()
}

/// Enumerate the exact vertex set: solve every rank-`d` tight subset and
/// keep the feasible solutions, deduplicated.
pub fn vertices(p: &HPolytope) -> Result<VertexSet> {
    let d = p.dim;
    let m = p.rows.len();
    if d > VERTEX_DIM_CAP || m > VERTEX_ROW_CAP {
        return Err(Error::DimensionCapExceeded { d, m });
    }
    if m < d {
        return Err(Error::Unbounded);
    }
    // DFS over row subsets in increasing index order; each chosen row must
    // raise the rank. Parallelized over the first chosen row.
    let found: Vec<BTreeSet<Vec<BigRational>>> = (0..=m - d)
        .into_par_iter()
        .map(|first| {
            let mut out = BTreeSet::new();
            let mut echelon = linalg::Echelon::new();
            if !echelon.push(&p.rows[first].a) {
                return out;
            }
            let mut chosen = vec![first];
            subset_dfs(p, first, &mut chosen, &mut echelon, &mut out);
            out
        })
        .collect();
    let mut set: BTreeSet<Vec<BigRational>> = BTreeSet::new();
    for s in found {
        set.extend(s);
    }
    if set.is_empty() {
        return Err(Error::Unbounded);
    }
    let vertices: Vec<Vec<BigRational>> = set.into_iter().collect();
    let integral = vertices.iter().all(|v| v.iter().all(|c| c.is_integer()));
    Ok(VertexSet { vertices, integral })
}

fn subset_dfs(
    p: &HPolytope,
    last: usize,
    chosen: &mut Vec<usize>,
    echelon: &mut linalg::Echelon,
    out: &mut BTreeSet<Vec<BigRational>>,
) {
    let d = p.dim;
    let m = p.rows.len();
    if echelon.rank() == d {
        let a: Vec<Vec<i64>> = chosen.iter().map(|&i| p.rows[i].a.clone()).collect();
        let b: Vec<i64> = chosen.iter().map(|&i| -p.rows[i].b).collect();
        if let Some(x) = linalg::solve_square(&a, &b) {
            let feasible = p
                .rows
                .iter()
                .all(|row| dot_q(&row.a, &x) + Q::from_integer(row.b as i128) >= Q::from_integer(0));
            if feasible {
                out.insert(x.iter().map(linalg::to_big).collect());
            }
        }
        return;
    }
    let need = d - echelon.rank();
    for next in last + 1..m {
        if m - next < need {
            break;
        }
        if !echelon.push(&p.rows[next].a) {
            continue;
        }
        chosen.push(next);
        subset_dfs(p, next, chosen, echelon, out);
        chosen.pop();
        echelon.pop();
    }
}

/// Whether every vertex is a lattice point.
pub fn is_integral(p: &HPolytope) -> Result<bool> {
    Ok(vertices(p)?.integral)
}

/// Verify that every row of the H-representation supports a facet: its
/// tight vertices affinely span a hyperplane. Returns the primitive facet
/// normals (the row vectors) on success.
pub fn verify_facets(p: &HPolytope) -> Result<Vec<Vec<i64>>> {
    let vs = vertices(p)?;
    let d = p.dim;
    for (i, row) in p.rows.iter().enumerate() {
        let tight: Vec<&Vec<BigRational>> = vs
            .vertices
            .iter()
            .filter(|v| {
                let mut s = BigRational::zero();
                for (c, x) in row.a.iter().zip(v.iter()) {
                    s += BigRational::from(BigInt::from(*c)) * x;
                }
                s + BigRational::from(BigInt::from(row.b)) == BigRational::zero()
            })
            .collect();
        if tight.is_empty() {
            return Err(Error::RedundantRow(i));
        }
        // affine rank: translate by the first tight vertex and take rank
        let base = tight[0];
        let diffs: Vec<Vec<Q>> = tight[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(base.iter())
                    .map(|(x, y)| {
                        let diff = x - y;
                        let n: i128 = diff.numer().try_into().expect("small rational");
                        let dd: i128 = diff.denom().try_into().expect("small rational");
                        Q::new(n, dd)
                    })
                    .collect()
            })
            .collect();
        if linalg::rank(&diffs) != d - 1 {
            return Err(Error::RedundantRow(i));
        }
    }
    Ok(p.rows.iter().map(|r| primitivize(&r.a)).collect())
}

/// Divide an integer vector by the gcd of its entries (sign preserved).
pub fn primitivize(a: &[i64]) -> Vec<i64> {
    let mut g: i64 = 0;
    for &x in a {
        g = num_integer::gcd(g, x.abs());
    }
    if g <= 1 {
        return a.to_vec();
    }
    a.iter().map(|&x| x / g).collect()
}

/// Exact lattice points via a bounding-box scan over the vertex extremes.
pub fn lattice_points(p: &HPolytope) -> Result<Vec<Vec<i64>>> {
    let vs = vertices(p)?;
    let d = p.dim;
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for v in &vs.vertices {
        for (i, c) in v.iter().enumerate() {
            lo[i] = lo[i].min(c.floor().to_integer().try_into().expect("small"));
            hi[i] = hi[i].max(c.ceil().to_integer().try_into().expect("small"));
        }
    }
    let mut count: u64 = 1;
    for i in 0..d {
        let w = (hi[i] - lo[i] + 1).max(0) as u64;
        count = count.saturating_mul(w);
        if count > BOX_CAP {
            return Err(Error::BoxCapExceeded(BOX_CAP));
        }
    }
    let mut out = Vec::new();
    let mut x = lo.clone();
    'outer: loop {
        let inside = p
            .rows
            .iter()
            .all(|row| row.a.iter().zip(&x).map(|(&a, &xi)| a as i128 * xi as i128).sum::<i128>() + row.b as i128 >= 0);
        if inside {
            out.push(x.clone());
        }
        for i in 0..d {
            if x[i] < hi[i] {
                x[i] += 1;
                continue 'outer;
            }
            x[i] = lo[i];
        }
        break;
    }
    Ok(out)
}

/// Reflexivity after translation: the polytope is integral and some
/// lattice point `p` satisfies `a_f · p = c_f + 1` for every primitivized
/// facet `a_f · x >= c_f`. Such a `p` is then automatically the unique
/// interior lattice point (any other interior lattice point `q` would put
/// `q - p` in the recession cone, which is trivial for a polytope).
pub fn is_reflexive_after_translation(p: &HPolytope) -> Result<bool> {
    let vs = vertices(p)?;
    if !vs.integral {
        return Err(Error::NotIntegral);
    }
    // Primitivize each facet inequality a·x + b >= 0 as a'·x >= c with a'
    // primitive; only rows that are actual facets matter, and for our
    // callers all rows are facets (checked separately); redundant parallel
    // copies are harmless here because they impose the same equation.
    let d = p.dim;
    let mut eqs: Vec<(Vec<i64>, BigRational)> = Vec::new();
    for row in &p.rows {
        let mut g: i64 = 0;
        for &x in &row.a {
            g = num_integer::gcd(g, x.abs());
        }
        if g == 0 {
            continue;
        }
        let a: Vec<i64> = row.a.iter().map(|&x| x / g).collect();
        // a·x >= -b/g, so the distance-one equation is a·p = -b/g + 1
        let c = BigRational::new(BigInt::from(-row.b), BigInt::from(g)) + BigRational::one();
        eqs.push((a, c));
    }
    // Solve the overdetermined system exactly: find d independent rows,
    // solve, then check every equation and integrality.
    let mut echelon = linalg::Echelon::new();
    let mut picked: Vec<usize> = Vec::new();
    for (i, (a, _)) in eqs.iter().enumerate() {
        if echelon.push(a) {
            picked.push(i);
            if picked.len() == d {
                break;
            }
        }
    }
    if picked.len() < d {
        return Ok(false);
    }
    let a: Vec<Vec<i64>> = picked.iter().map(|&i| eqs[i].0.clone()).collect();
    // right-hand sides may be non-integer rationals; scale to integers
    let mut rhs_num: Vec<i64> = Vec::new();
    let mut scale: i64 = 1;
    for &i in &picked {
        let den: i64 = eqs[i].1.denom().try_into().expect("small");
        scale = num_integer::lcm(scale, den);
    }
    for &i in &picked {
        let v = &eqs[i].1 * BigRational::from(BigInt::from(scale));
        rhs_num.push(v.numer().try_into().expect("small"));
    }
    let a_scaled: Vec<Vec<i64>> = a.iter().map(|row| row.iter().map(|&x| x * scale).collect()).collect();
    let Some(x) = linalg::solve_square(&a_scaled, &rhs_num) else {
        return Ok(false);
    };
    if !x.iter().all(|c| c.is_integer()) {
        return Ok(false);
    }
    for (aa, cc) in &eqs {
        let lhs = dot_q(aa, &x);
        if linalg::to_big(&lhs) != *cc {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The tropical 3-move coordinate change at position `k` (1-based): maps
/// `(t_k, t_{k+1}, t_{k+2})` to
/// `(max(t_{k+2}, t_{k+1} - t_k), t_k + t_{k+2}, min(t_k, t_{k+1} - t_{k+2}))`.
pub fn three_move_transfer(point: &[BigRational], k: usize) -> Vec<BigRational> {
    assert!(k >= 1 && k + 1 < point.len(), "position k must satisfy k+2 <= nbar");
    let mut out = point.to_vec();
    let (a, b, c) = (point[k - 1].clone(), point[k].clone(), point[k + 1].clone());
    out[k - 1] = std::cmp::max(c.clone(), b.clone() - a.clone());
    out[k] = a.clone() + c.clone();
    out[k + 1] = std::cmp::min(a, b - c);
    out
}

/// Integer convenience wrapper for [`three_move_transfer`].
pub fn three_move_transfer_int(point: &[i64], k: usize) -> Vec<i64> {
    assert!(k >= 1 && k + 1 < point.len());
    let mut out = point.to_vec();
    let (a, b, c) = (point[k - 1], point[k], point[k + 1]);
    out[k - 1] = c.max(b - a);
    out[k] = a + c;
    out[k + 1] = a.min(b - c);
    out
}

/// Interior lattice points by box scan; test oracle for reflexivity.
pub fn interior_lattice_points(p: &HPolytope) -> Result<Vec<Vec<i64>>> {
    let pts = lattice_points(p)?;
    Ok(pts
        .into_iter()
        .filter(|x| {
            p.rows
                .iter()
                .all(|row| row.a.iter().zip(x).map(|(&a, &xi)| a as i128 * xi as i128).sum::<i128>() + row.b as i128 > 0)
        })
        .collect())
}
