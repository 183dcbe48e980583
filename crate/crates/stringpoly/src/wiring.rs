//! Wiring diagrams, chambers, and rigorous paths.
//!
//! The diagram of a word `(i_1, ..., i_nbar)` is modeled combinatorially:
//! horizontal level lines `0..=nbar` carry the track occupancy of the
//! `n+1` wires (level 0 is the bottom boundary, ordered `l_{n+1}, ..., l_1`
//! left to right), and the j-th crossing from the top sits in column `i_j`
//! between levels `nbar-j` and `nbar-j+1`. Faces of the arrangement are
//! connected components of grid cells; the chamber `C_j` is the face
//! directly below node `t_j`.
//!
//! A rigorous path in orientation `k` starts at the bottom of wire `l_k`,
//! travels wires along their orientation (wires `1..=k` upward, the rest
//! downward), switches wires at crossings, never reuses a node, and ends
//! at the bottom of `l_{k+1}`. At a crossing with a wire of the *same*
//! orientation the path may pass straight through only while riding the
//! larger-indexed wire upward or the smaller-indexed wire downward; the
//! two excluded configurations are the forbidden fragments. The rule is
//! frozen by regression tests reproducing the full path sets of several
//! worked diagrams.

use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Which of the two extremal wires an operation refers to: `D` is the wire
/// `l_{n+1}`, `A` is the wire `l_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bullet {
    A,
    D,
}

impl Bullet {
    pub fn letter(self) -> char {
        match self {
            Bullet::A => 'A',
            Bullet::D => 'D',
        }
    }
}

/// Combinatorial wiring diagram of a reduced word.
#[derive(Debug, Clone)]
pub struct WiringDiagram {
    pub word: Vec<usize>,
    pub n: usize,
    pub nbar: usize,
    /// `occ[level][track-1]` = wire occupying the track at that level.
    occ: Vec<Vec<usize>>,
    /// `track[wire-1][level]` = track of the wire at that level.
    track: Vec<Vec<usize>>,
    /// `cross[j-1]` = unordered wire pair crossing at node `t_j`.
    cross: Vec<(usize, usize)>,
    /// `crossings_on[w-1]` = crossings on wire `w`, bottom to top, as
    /// `(strip below the node, node index, other wire)`.
    crossings_on: Vec<Vec<(usize, usize, usize)>>,
    /// Face of the chamber `C_j`, indexed by `j-1`.
    chamber_face: Vec<usize>,
    /// Cells of each face id.
    face_cells: BTreeMap<usize, Vec<(usize, usize)>>,
    /// Chamber matrix: row `j-1` expresses `m_j` in the `t` coordinates.
    chamber_matrix: Vec<Vec<i64>>,
}

impl WiringDiagram {
    pub fn build(word: &crate::weyl::ReducedWord) -> WiringDiagram {
        let n = word.rank();
        let letters = word.letters().to_vec();
        let nbar = letters.len();
        assert!(nbar <= 64, "path enumeration uses 64-bit node masks (rank at most 10)");
        let mut occ = Vec::with_capacity(nbar + 1);
        occ.push((1..=n + 1).rev().collect::<Vec<_>>());
        let mut cross = vec![(0, 0); nbar];
        for idx in 0..nbar {
            // crossings applied bottom-up are t_nbar, ..., t_1
            let j = nbar - idx;
            let c = letters[j - 1];
            let mut cur = occ[idx].clone();
            cross[j - 1] = (cur[c - 1], cur[c]);
            cur.swap(c - 1, c);
            occ.push(cur);
        }
        debug_assert!(occ[nbar].iter().copied().eq(1..=n + 1));
        let mut track = vec![vec![0; nbar + 1]; n + 1];
        for (level, cur) in occ.iter().enumerate() {
            for (t, &w) in cur.iter().enumerate() {
                track[w - 1][level] = t + 1;
            }
        }
        let mut crossings_on = vec![Vec::new(); n + 1];
        for j in 1..=nbar {
            let (a, b) = cross[j - 1];
            let h = nbar - j; // node sits between strips h and h+1
            crossings_on[a - 1].push((h, j, b));
            crossings_on[b - 1].push((h, j, a));
        }
        for list in &mut crossings_on {
            list.sort();
        }

        // Faces via union-find over cells (level strip, gap).
        let cell_id = |l: usize, g: usize| l * n + (g - 1);
        let mut parent: Vec<usize> = (0..(nbar + 1) * n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for l in 0..nbar {
            // crossing between strips l and l+1 is t_{nbar-l}, column:
            let pinch = letters[nbar - l - 1];
            for g in 1..=n {
                if g != pinch {
                    let (ra, rb) = (find(&mut parent, cell_id(l, g)), find(&mut parent, cell_id(l + 1, g)));
                    parent[ra] = rb;
                }
            }
        }
        let mut faces = vec![vec![0; n]; nbar + 1];
        let mut face_cells: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for l in 0..=nbar {
            for g in 1..=n {
                let f = find(&mut parent, cell_id(l, g));
                faces[l][g - 1] = f;
                face_cells.entry(f).or_default().push((l, g));
            }
        }
        let chamber_face: Vec<usize> = (1..=nbar).map(|j| faces[nbar - j][letters[j - 1] - 1]).collect();
        debug_assert_eq!(chamber_face.iter().collect::<BTreeSet<_>>().len(), nbar);

        // Chamber matrix from boundary nodes of each chamber face. Each
        // face spans a single gap over a contiguous level interval; the
        // pinches at its top/bottom contribute +1, crossings on its side
        // walls contribute -1.
        let mut chamber_matrix = vec![vec![0i64; nbar]; nbar];
        for j in 1..=nbar {
            let f = chamber_face[j - 1];
            let cells = &face_cells[&f];
            let g = cells[0].1;
            debug_assert!(cells.iter().all(|&(_, gg)| gg == g));
            let lmin = cells.iter().map(|&(l, _)| l).min().unwrap();
            let lmax = cells.iter().map(|&(l, _)| l).max().unwrap();
            debug_assert_eq!(lmax - lmin + 1, cells.len());
            let row = &mut chamber_matrix[j - 1];
            // top pinch is t_j itself
            debug_assert_eq!(nbar - lmax, j);
            row[j - 1] = 1;
            if lmin > 0 && letters[nbar - (lmin - 1) - 1] == g {
                row[nbar - (lmin - 1) - 1] = 1;
            }
            for l in lmin..lmax {
                let jj = nbar - l;
                let c = letters[jj - 1];
                if c + 1 == g || c == g + 1 {
                    row[jj - 1] = -1;
                }
            }
        }

        let _ = faces;
        WiringDiagram {
            word: letters,
            n,
            nbar,
            occ,
            track,
            cross,
            crossings_on,
            chamber_face,
            face_cells,
            chamber_matrix,
        }
    }

    /// Wire pair crossing at node `t_j`.
    pub fn crossing(&self, j: usize) -> (usize, usize) {
        self.cross[j - 1]
    }

    /// Node at which wires `a` and `b` cross.
    pub fn node_of(&self, a: usize, b: usize) -> usize {
        (1..=self.nbar)
            .find(|&j| {
                let (x, y) = self.cross[j - 1];
                (x, y) == (a, b) || (x, y) == (b, a)
            })
            .expect("every wire pair crosses exactly once")
    }

    /// Track of `wire` at `level`.
    pub fn track_of(&self, wire: usize, level: usize) -> usize {
        self.track[wire - 1][level]
    }

    /// Track occupancy at a level, left to right.
    pub fn occupancy(&self, level: usize) -> &[usize] {
        &self.occ[level]
    }

    /// The `t -> m` change of coordinates: row `j-1` expresses the chamber
    /// variable `m_j` as a signed sum of node variables. The matrix is
    /// triangular with unit diagonal (nonzero entries only at columns
    /// `>= j`), hence unimodular.
    pub fn chamber_matrix(&self) -> &Vec<Vec<i64>> {
        &self.chamber_matrix
    }

    /// Whether node `t_j` lies on `wire`.
    pub fn node_on_wire(&self, j: usize, wire: usize) -> bool {
        let (a, b) = self.cross[j - 1];
        a == wire || b == wire
    }

    /// For a node not on `wire`: is it on the left of the wire at the
    /// node's height? (Columns strictly compare; the wire cannot occupy
    /// the node's own tracks.)
    pub fn node_left_of_wire(&self, j: usize, wire: usize) -> bool {
        debug_assert!(!self.node_on_wire(j, wire));
        let h = self.nbar - j;
        let c = self.word[j - 1];
        let p = self.track_of(wire, h);
        debug_assert_eq!(p, self.track_of(wire, h + 1));
        debug_assert!(p != c && p != c + 1);
        c < p
    }

    fn cells_of_face(&self, f: usize) -> &[(usize, usize)] {
        &self.face_cells[&f]
    }

    /// Text dump of the occupancy grid, for debugging only.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for level in (0..=self.nbar).rev() {
            s.push_str(&format!("{level:>3} |"));
            for w in &self.occ[level] {
                s.push_str(&format!(" l{w}"));
            }
            s.push('\n');
        }
        s
    }
}

/// A closed region below a direct path: its chambers and its grid cells.
pub type Region = (BTreeSet<usize>, BTreeSet<(usize, usize)>);

/// A rigorous path together with both inequality vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigorousPath {
    /// Orientation: the path runs from `L_k` to `L_{k+1}`.
    pub source: usize,
    /// Wire expression `l_{r_1} -> ... -> l_{r_{p+1}}`.
    pub wires: Vec<usize>,
    /// Switch nodes, in travel order.
    pub nodes: Vec<usize>,
    /// String-inequality coefficients in `t` coordinates (+1/-1 at travel
    /// nodes by wire-index comparison).
    pub w_t: Vec<i64>,
    /// String-inequality coefficients in chamber coordinates (indicator of
    /// the chambers enclosed by the path).
    pub w_m: Vec<i64>,
    /// Chambers enclosed by the path (1-based node indices).
    pub chambers: BTreeSet<usize>,
    /// Peaks (local maxima) in travel order.
    pub peaks: Vec<usize>,
    /// The global maximal node of the path (smallest node index).
    pub max_peak: usize,
}

impl RigorousPath {
    /// `"l1->l3->l2"` serialization of the wire expression.
    pub fn expression(&self) -> String {
        self.wires.iter().map(|w| format!("l{w}")).collect::<Vec<_>>().join("->")
    }

    /// Whether the path is `bullet`-new: its node set touches the extremal
    /// wire (`l_{n+1}` for D, `l_1` for A).
    pub fn is_new(&self, diagram: &WiringDiagram, bullet: Bullet) -> bool {
        let wire = match bullet {
            Bullet::D => diagram.n + 1,
            Bullet::A => 1,
        };
        self.nodes.iter().any(|&j| diagram.node_on_wire(j, wire))
    }
}

fn is_up(wire: usize, k: usize) -> bool {
    wire <= k
}

/// Segments of a path: `(wire, lowest strip, highest strip)` inclusive.
fn segments(diagram: &WiringDiagram, path_source: usize, wires: &[usize], nodes: &[usize]) -> Vec<(usize, usize, usize)> {
    let nbar = diagram.nbar;
    let hs: Vec<usize> = nodes.iter().map(|&j| nbar - j).collect();
    let mut segs = Vec::with_capacity(wires.len());
    for (i, &w) in wires.iter().enumerate() {
        if i == 0 {
            segs.push((w, 0, hs[0]));
        } else if i == wires.len() - 1 {
            segs.push((w, 0, hs[i - 1]));
        } else {
            let (h1, h2) = (hs[i - 1], hs[i]);
            if is_up(w, path_source) {
                segs.push((w, h1 + 1, h2));
            } else {
                segs.push((w, h2 + 1, h1));
            }
        }
    }
    segs
}

/// Cells enclosed by the path and the bottom boundary (even-odd rule per
/// level strip).
fn enclosed_cells(diagram: &WiringDiagram, source: usize, wires: &[usize], nodes: &[usize]) -> BTreeSet<(usize, usize)> {
    let segs = segments(diagram, source, wires, nodes);
    let mut cells = BTreeSet::new();
    for level in 0..=diagram.nbar {
        let mut tracks: Vec<usize> = segs
            .iter()
            .filter(|&&(_, lo, hi)| lo <= level && level <= hi)
            .map(|&(w, _, _)| diagram.track_of(w, level))
            .collect();
        tracks.sort_unstable();
        let mut cnt = 0usize;
        let mut ti = 0usize;
        for g in 1..=diagram.n {
            while ti < tracks.len() && tracks[ti] <= g {
                cnt += 1;
                ti += 1;
            }
            if cnt % 2 == 1 {
                cells.insert((level, g));
            }
        }
    }
    cells
}

/// Chambers whose face lies inside the enclosed region.
fn enclosed_chambers(diagram: &WiringDiagram, source: usize, wires: &[usize], nodes: &[usize]) -> BTreeSet<usize> {
    let cells = enclosed_cells(diagram, source, wires, nodes);
    let mut out = BTreeSet::new();
    for j in 1..=diagram.nbar {
        let f = diagram.chamber_face[j - 1];
        let fc = diagram.cells_of_face(f);
        let inside = fc.iter().filter(|c| cells.contains(c)).count();
        // a face is never cut by the path
        debug_assert!(inside == 0 || inside == fc.len());
        if inside == fc.len() {
            out.insert(j);
        }
    }
    out
}

fn finish_path(diagram: &WiringDiagram, k: usize, wires: Vec<usize>, nodes: Vec<usize>) -> RigorousPath {
    let nbar = diagram.nbar;
    let mut w_t = vec![0i64; nbar];
    for (i, &j) in nodes.iter().enumerate() {
        let (r, s) = (wires[i], wires[i + 1]);
        w_t[j - 1] = if r < s { 1 } else { -1 };
    }
    let chambers = enclosed_chambers(diagram, k, &wires, &nodes);
    let mut w_m = vec![0i64; nbar];
    for &c in &chambers {
        w_m[c - 1] = 1;
    }
    let peaks: Vec<usize> = nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| is_up(wires[i], k) && !is_up(wires[i + 1], k))
        .map(|(_, &j)| j)
        .collect();
    let max_peak = peaks.iter().copied().min().expect("every path has a peak");
    RigorousPath { source: k, wires, nodes, w_t, w_m, chambers, peaks, max_peak }
}

/// Enumerate all rigorous paths of the diagram across all orientations,
/// sorted by `(source, max_peak)`.
pub fn enumerate_rigorous_paths(diagram: &WiringDiagram) -> Vec<RigorousPath> {
    let n = diagram.n;
    let mut out = Vec::new();
    for k in 1..=n {
        let mut wires = vec![k];
        let mut nodes = Vec::new();
        dfs(diagram, k, k, 0, 0u64, &mut wires, &mut nodes, &mut out);
    }
    out.sort_by_key(|p| (p.source, p.max_peak, p.wires.clone()));
    out
}

/// Walk wire `w` from level `lvl` in its orientation, branching at each
/// crossing into switch/pass as the fragment rule allows.
#[allow(clippy::too_many_arguments)]
fn dfs(
    diagram: &WiringDiagram,
    k: usize,
    w: usize,
    lvl: usize,
    visited: u64,
    wires: &mut Vec<usize>,
    nodes: &mut Vec<usize>,
    out: &mut Vec<RigorousPath>,
) {
    let up = is_up(w, k);
    let list = &diagram.crossings_on[w - 1];
    let ahead: Vec<(usize, usize, usize)> = if up {
        list.iter().copied().filter(|&(h, _, _)| h >= lvl).collect()
    } else {
        let mut v: Vec<_> = list.iter().copied().filter(|&(h, _, _)| h < lvl).collect();
        v.reverse();
        v
    };
    let mut visited = visited;
    for (h, j, q) in ahead {
        if visited & (1 << (j - 1)) != 0 {
            return; // would pass through a used node
        }
        let same = is_up(q, k) == up;
        // switch to q
        {
            let next_lvl = if is_up(q, k) { h + 1 } else { h };
            wires.push(q);
            nodes.push(j);
            dfs(diagram, k, q, next_lvl, visited | (1 << (j - 1)), wires, nodes, out);
            wires.pop();
            nodes.pop();
        }
        // pass through, fragment rule: riding the larger wire is only
        // allowed upward, the smaller wire only downward
        if same {
            let pass_ok = if up { w > q } else { w < q };
            if !pass_ok {
                return;
            }
        }
        visited |= 1 << (j - 1);
    }
    if !up && w == k + 1 {
        out.push(finish_path(diagram, k, wires.clone(), nodes.clone()));
    }
}

/// Chamber decomposition of the regions `R_i` enclosed by the direct paths
/// `l_i -> l_{i+1}`, for `i` in `1..=n`. Returns `(chambers, cells)` per
/// region.
pub fn regions(diagram: &WiringDiagram) -> Vec<Region> {
    (1..=diagram.n)
        .map(|i| {
            let j = diagram.node_of(i, i + 1);
            let wires = vec![i, i + 1];
            let nodes = vec![j];
            (
                enclosed_chambers(diagram, i, &wires, &nodes),
                enclosed_cells(diagram, i, &wires, &nodes),
            )
        })
        .collect()
}

/// Whether node `t_j` lies in the closed region with the given cell set.
fn node_in_cells(diagram: &WiringDiagram, j: usize, cells: &BTreeSet<(usize, usize)>) -> bool {
    let h = diagram.nbar - j;
    let c = diagram.word[j - 1];
    for (l, g) in [(h, c), (h + 1, c), (h, c.wrapping_sub(1)), (h + 1, c.wrapping_sub(1)), (h, c + 1), (h + 1, c + 1)] {
        if (1..=diagram.n).contains(&g) && l <= diagram.nbar && cells.contains(&(l, g)) {
            return true;
        }
    }
    false
}

/// Whether the path stays weakly below (right of) `wire`.
fn below_wire(diagram: &WiringDiagram, p: &RigorousPath, wire: usize) -> bool {
    for (w, lo, hi) in segments(diagram, p.source, &p.wires, &p.nodes) {
        if w == wire {
            continue;
        }
        for level in lo..=hi {
            if diagram.track_of(w, level) < diagram.track_of(wire, level) {
                return false;
            }
        }
    }
    true
}

/// The canonical D-new path for `k`: the unique rigorous path with unique
/// peak at `l_k ∩ l_{n+1}`, traveling from `l_k` to `l_{n+1}` there,
/// staying below `l_{n+1}`, with monotone wire indices on both flanks, and
/// contained in the largest region whose closure holds the peak node.
pub fn canonical_d_new_path<'a>(
    diagram: &WiringDiagram,
    paths: &'a [RigorousPath],
    k: usize,
) -> Result<&'a RigorousPath> {
    let n = diagram.n;
    let jk = diagram.node_of(k, n + 1);
    let regs = regions(diagram);
    let candidates: Vec<&RigorousPath> = paths
        .iter()
        .filter(|p| {
            if p.peaks != vec![jk] {
                return false;
            }
            let travels = p
                .nodes
                .iter()
                .enumerate()
                .any(|(i, &j)| j == jk && p.wires[i] == k && p.wires[i + 1] == n + 1);
            if !travels || !below_wire(diagram, p, n + 1) {
                return false;
            }
            // wire expression r_p .. r_1 k (n+1) u_q .. u_1 with both index
            // sequences increasing, i.e. decreasing left to right
            let pos = p.wires.iter().position(|&w| w == n + 1).unwrap();
            let left = &p.wires[..pos.saturating_sub(1)];
            if left.windows(2).any(|ab| ab[0] <= ab[1]) {
                return false;
            }
            let right = &p.wires[pos + 1..];
            if right.windows(2).any(|ab| ab[0] <= ab[1]) {
                return false;
            }
            // containment in R_{a_k}
            let ak = (1..=n).filter(|&a| node_in_cells(diagram, jk, &regs[a - 1].1)).max();
            match ak {
                None => false,
                Some(a) => p.chambers.is_subset(&regs[a - 1].0),
            }
        })
        .collect();
    match candidates.as_slice() {
        [p] => Ok(p),
        _ => Err(Error::NotFound(k)),
    }
}

/// Label of a leftover (non-selected) rigorous path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TildeLabel {
    /// The leftover whose maximal peak is not on the extremal wire.
    Tilde0,
    /// Leftover `l_{n-i} -> l_{n+1} -> l_{n-i+1}` with peak on `l_{n+1}`.
    Tilde(usize),
}

/// Result of the per-node path selection.
#[derive(Debug, Clone)]
pub struct GammaSelection {
    /// Index into the path list for each node `t_j`, `j` in `1..=nbar`.
    pub gamma: Vec<usize>,
    /// Leftover paths, sorted with `Tilde0` first then ascending `i`.
    pub leftovers: Vec<(TildeLabel, usize)>,
}

/// Select the designated path for every node: the unique path with that
/// maximal peak, the path enclosing the larger region when two nest, or
/// the canonical D-new path when the peak is on `l_{n+1}`.
pub fn select_gamma(diagram: &WiringDiagram, paths: &[RigorousPath]) -> Result<GammaSelection> {
    let n = diagram.n;
    let nbar = diagram.nbar;
    let mut by_peak: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, p) in paths.iter().enumerate() {
        by_peak.entry(p.max_peak).or_default().push(i);
    }
    let canonical: BTreeSet<usize> = (1..=n)
        .filter_map(|k| {
            canonical_d_new_path(diagram, paths, k)
                .ok()
                .map(|p| paths.iter().position(|q| std::ptr::eq(q, p)).unwrap())
        })
        .collect();
    let mut gamma = vec![usize::MAX; nbar];
    let mut leftovers = Vec::new();
    for j in 1..=nbar {
        let group = by_peak.get(&j).map_or(&[][..], |v| &v[..]);
        match group {
            [i] => gamma[j - 1] = *i,
            [a, b] => {
                let (pa, pb) = (&paths[*a], &paths[*b]);
                let (sel, rest) = if pa.chambers.is_subset(&pb.chambers) && pa.chambers != pb.chambers {
                    (*b, *a)
                } else if pb.chambers.is_subset(&pa.chambers) && pa.chambers != pb.chambers {
                    (*a, *b)
                } else if diagram.node_on_wire(j, n + 1) && canonical.contains(a) != canonical.contains(b) {
                    if canonical.contains(a) {
                        (*a, *b)
                    } else {
                        (*b, *a)
                    }
                } else {
                    return Err(Error::TieUnresolvable(j));
                };
                gamma[j - 1] = sel;
                leftovers.push(rest);
            }
            _ => return Err(Error::TieUnresolvable(j)),
        }
    }
    let mut labeled = Vec::new();
    for i in leftovers {
        let p = &paths[i];
        let label = if diagram.node_on_wire(p.max_peak, n + 1) {
            // expected form l_{n-i} -> l_{n+1} -> l_{n-i+1}
            let src = p.wires[0];
            if src >= n || p.wires != vec![src, n + 1, src + 1] {
                return Err(Error::UnlabeledLeftover(p.expression()));
            }
            TildeLabel::Tilde(n - src)
        } else {
            TildeLabel::Tilde0
        };
        labeled.push((label, i));
    }
    labeled.sort();
    if labeled.windows(2).any(|ab| ab[0].0 == ab[1].0) {
        return Err(Error::UnlabeledLeftover("duplicate leftover label".into()));
    }
    Ok(GammaSelection { gamma, leftovers: labeled })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::ReducedWord;

    fn w(letters: &[usize], n: usize) -> ReducedWord {
        ReducedWord::new(letters.to_vec(), n).unwrap()
    }

    fn r7_word() -> ReducedWord {
        w(&[4, 3, 4, 2, 3, 4, 1, 2, 3, 4, 5, 4, 6, 5, 4, 3, 2, 1, 4, 3, 2], 6)
    }

    fn r6_word() -> ReducedWord {
        w(&[4, 3, 4, 2, 3, 4, 1, 2, 5, 4, 3, 2, 1, 4, 5], 5)
    }

    fn exprs(paths: &[RigorousPath]) -> BTreeSet<String> {
        paths.iter().map(|p| p.expression()).collect()
    }

    #[test]
    fn diagram_basics() {
        let d = WiringDiagram::build(&w(&[1], 1));
        assert_eq!(d.nbar, 1);
        assert_eq!(d.crossing(1), (2, 1));
        let d = WiringDiagram::build(&w(&[1, 2, 1, 3, 2, 1], 3));
        // node t4 sits in column 3
        assert_eq!(d.word[3], 3);
        assert_eq!(d.crossing(4), (4, 1));
        // top boundary is l_1 .. l_4
        assert!(d.occupancy(6).iter().copied().eq(1..=4));
    }

    #[test]
    fn chamber_matrix_132132() {
        let d = WiringDiagram::build(&w(&[1, 3, 2, 1, 3, 2], 3));
        let m = d.chamber_matrix();
        assert_eq!(m[0], vec![1, 0, -1, 1, 0, 0]); // m_1 = t1 - t3 + t4
        assert_eq!(m[3], vec![0, 0, 0, 1, 0, -1]); // m_4 = t4 - t6
        assert_eq!(m[2], vec![0, 0, 1, -1, -1, 1]); // m_3 = t3 - t4 - t5 + t6
        for j in 0..6 {
            assert_eq!(m[j][j], 1);
            for i in 0..j {
                assert_eq!(m[j][i], 0, "row {j} must vanish before the diagonal");
            }
        }
    }

    #[test]
    fn chamber_matrix_unimodular_r4() {
        for word in crate::weyl::enumerate_reduced_words(3).unwrap() {
            let d = WiringDiagram::build(&word);
            let m = d.chamber_matrix();
            for j in 0..d.nbar {
                assert_eq!(m[j][j], 1);
                for i in 0..j {
                    assert_eq!(m[j][i], 0);
                }
            }
        }
    }

    #[test]
    fn paths_of_single_crossing() {
        let d = WiringDiagram::build(&w(&[1], 1));
        let ps = enumerate_rigorous_paths(&d);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].expression(), "l1->l2");
        assert_eq!(ps[0].w_m, vec![1]);
        assert_eq!(ps[0].w_t, vec![1]);
    }

    #[test]
    fn seven_paths_of_132132() {
        let d = WiringDiagram::build(&w(&[1, 3, 2, 1, 3, 2], 3));
        let ps = enumerate_rigorous_paths(&d);
        assert_eq!(ps.len(), 7);
        let by_expr: BTreeMap<String, &RigorousPath> = ps.iter().map(|p| (p.expression(), p)).collect();
        let expect: &[(&str, [i64; 6])] = &[
            ("l1->l2", [1, 0, 1, 0, 1, 0]),
            ("l1->l4->l2", [0, 0, 1, 0, 1, 0]),
            ("l1->l3->l2", [0, 0, 0, 0, 1, 0]),
            ("l2->l3", [0, 0, 0, 0, 0, 1]),
            ("l3->l4", [0, 1, 1, 1, 0, 0]),
            ("l3->l1->l4", [0, 0, 1, 1, 0, 0]),
            ("l3->l2->l4", [0, 0, 0, 1, 0, 0]),
        ];
        for (expr, wm) in expect {
            let p = by_expr.get(*expr).unwrap_or_else(|| panic!("missing {expr}"));
            assert_eq!(p.w_m, wm.to_vec(), "w_m of {expr}");
        }
    }

    #[test]
    fn six_paths_of_standard_word() {
        let d = WiringDiagram::build(&w(&[1, 2, 1, 3, 2, 1], 3));
        let ps = enumerate_rigorous_paths(&d);
        assert_eq!(
            exprs(&ps),
            ["l1->l2", "l1->l3->l2", "l1->l4->l2", "l2->l3", "l2->l4->l3", "l3->l4"]
                .iter()
                .map(|s| s.to_string())
                .collect()
        );
    }

    #[test]
    fn r7_path_count_and_named_paths() {
        let d = WiringDiagram::build(&r7_word());
        let ps = enumerate_rigorous_paths(&d);
        assert_eq!(ps.len(), 24);
        let es = exprs(&ps);
        for needed in [
            "l2->l6->l7->l3",
            "l3->l7->l4",
            "l4->l7->l5",
            "l6->l3->l7",
            "l6->l4->l7",
            "l6->l5->l7",
            "l6->l7",
            "l1->l7->l2",
            "l2->l7->l6->l3",
        ] {
            assert!(es.contains(needed), "missing {needed}");
        }
    }

    #[test]
    fn r6_path_count_and_named_paths() {
        let d = WiringDiagram::build(&r6_word());
        let ps = enumerate_rigorous_paths(&d);
        assert_eq!(ps.len(), 16);
        let es = exprs(&ps);
        for needed in ["l3->l1->l6->l4", "l2->l6->l3", "l3->l6->l4", "l4->l6->l5", "l5->l6", "l3->l6->l1->l4"] {
            assert!(es.contains(needed), "missing {needed}");
        }
    }

    #[test]
    fn t_and_m_vectors_agree_through_chamber_matrix() {
        for word in crate::weyl::enumerate_reduced_words(3).unwrap() {
            let d = WiringDiagram::build(&word);
            let m = d.chamber_matrix();
            for p in enumerate_rigorous_paths(&d) {
                // w_t = M^T w_m
                for col in 0..d.nbar {
                    let lhs: i64 = (0..d.nbar).map(|row| m[row][col] * p.w_m[row]).sum();
                    assert_eq!(lhs, p.w_t[col], "word {word} path {}", p.expression());
                }
            }
        }
    }

    #[test]
    fn regions_of_r7() {
        let d = WiringDiagram::build(&r7_word());
        let regs = regions(&d);
        let sets: Vec<Vec<usize>> = regs.iter().map(|(c, _)| c.iter().copied().collect()).collect();
        assert_eq!(sets[0], vec![10, 11, 13]);
        assert_eq!(sets[1], vec![6, 9, 12, 14, 15]);
        assert_eq!(sets[2], vec![3, 5, 8, 16, 19]);
        assert_eq!(sets[3], vec![1, 2, 4, 7, 17, 20]);
        assert_eq!(sets[4], vec![21]);
        assert_eq!(sets[5], vec![15, 16, 17, 18]);
    }

    #[test]
    fn regions_of_r6() {
        let d = WiringDiagram::build(&r6_word());
        let regs = regions(&d);
        let sets: Vec<Vec<usize>> = regs.iter().map(|(c, _)| c.iter().copied().collect()).collect();
        assert_eq!(sets[0], vec![15]);
        assert_eq!(sets[1], vec![6, 9, 14]);
        assert_eq!(sets[2], vec![3, 5, 8, 10, 11]);
        assert_eq!(sets[3], vec![1, 2, 4, 7, 12]);
        assert_eq!(sets[4], vec![13]);
    }

    #[test]
    fn single_crossing_region() {
        let d = WiringDiagram::build(&w(&[1], 1));
        let regs = regions(&d);
        assert_eq!(regs[0].0, BTreeSet::from([1]));
    }

    #[test]
    fn canonical_paths_of_r7() {
        let d = WiringDiagram::build(&r7_word());
        let ps = enumerate_rigorous_paths(&d);
        let expect = [
            (1, "l1->l7->l2"),
            (2, "l2->l7->l6->l3"),
            (3, "l6->l3->l7"),
            (4, "l6->l4->l7"),
            (5, "l6->l5->l7"),
            (6, "l6->l7"),
        ];
        for (k, expr) in expect {
            let p = canonical_d_new_path(&d, &ps, k).unwrap();
            assert_eq!(p.expression(), expr, "k = {k}");
        }
    }

    #[test]
    fn canonical_paths_of_r6() {
        let d = WiringDiagram::build(&r6_word());
        let ps = enumerate_rigorous_paths(&d);
        let expect = [
            (1, "l3->l1->l6->l4"),
            (2, "l2->l6->l3"),
            (3, "l3->l6->l4"),
            (4, "l4->l6->l5"),
            (5, "l5->l6"),
        ];
        for (k, expr) in expect {
            let p = canonical_d_new_path(&d, &ps, k).unwrap();
            assert_eq!(p.expression(), expr, "k = {k}");
        }
    }

    #[test]
    fn canonical_path_trivial() {
        let d = WiringDiagram::build(&w(&[1], 1));
        let ps = enumerate_rigorous_paths(&d);
        assert_eq!(canonical_d_new_path(&d, &ps, 1).unwrap().expression(), "l1->l2");
    }

    #[test]
    fn d_new_paths() {
        let d = WiringDiagram::build(&w(&[1, 2, 1, 3, 2, 1], 3));
        let ps = enumerate_rigorous_paths(&d);
        let by_expr: BTreeMap<String, &RigorousPath> = ps.iter().map(|p| (p.expression(), p)).collect();
        assert!(by_expr["l2->l4->l3"].is_new(&d, Bullet::D));
        assert!(!by_expr["l2->l3"].is_new(&d, Bullet::D));
        let d7 = WiringDiagram::build(&r7_word());
        let ps7 = enumerate_rigorous_paths(&d7);
        for expr in ["l2->l6->l7->l3", "l3->l7->l4", "l4->l7->l5"] {
            let p = ps7.iter().find(|p| p.expression() == expr).unwrap();
            assert!(p.is_new(&d7, Bullet::D), "{expr} must be D-new");
        }
    }

    #[test]
    fn select_gamma_213213() {
        let word = w(&[2, 1, 3, 2, 1, 3], 3);
        let d = WiringDiagram::build(&word);
        let ps = enumerate_rigorous_paths(&d);
        let sel = select_gamma(&d, &ps).unwrap();
        assert_eq!(ps[sel.gamma[1]].expression(), "l2->l4->l1->l3");
        assert_eq!(sel.leftovers.len(), 1);
        let (label, i) = sel.leftovers[0];
        assert_eq!(label, TildeLabel::Tilde0);
        assert_eq!(ps[i].expression(), "l2->l1->l3");
    }

    #[test]
    fn select_gamma_132132() {
        let word = w(&[1, 3, 2, 1, 3, 2], 3);
        let d = WiringDiagram::build(&word);
        let ps = enumerate_rigorous_paths(&d);
        let sel = select_gamma(&d, &ps).unwrap();
        assert_eq!(ps[sel.gamma[2]].expression(), "l3->l1->l4");
        let (label, i) = sel.leftovers[0];
        assert_eq!(label, TildeLabel::Tilde(2));
        assert_eq!(ps[i].expression(), "l1->l4->l2");
    }

    #[test]
    fn select_gamma_single() {
        let word = w(&[1], 1);
        let d = WiringDiagram::build(&word);
        let ps = enumerate_rigorous_paths(&d);
        let sel = select_gamma(&d, &ps).unwrap();
        assert_eq!(ps[sel.gamma[0]].expression(), "l1->l2");
        assert!(sel.leftovers.is_empty());
    }

    #[test]
    fn intermediate_wires_avoid_target_and_stay_in_region() {
        for word in crate::weyl::enumerate_reduced_words(3).unwrap() {
            let d = WiringDiagram::build(&word);
            let regs = regions(&d);
            for p in enumerate_rigorous_paths(&d) {
                for &mid in &p.wires[1..p.wires.len() - 1] {
                    assert_ne!(mid, p.source + 1, "word {word}: {} revisits target wire", p.expression());
                }
                assert!(
                    p.chambers.is_subset(&regs[p.source - 1].0),
                    "word {word}: {} leaves R_{}",
                    p.expression(),
                    p.source
                );
            }
        }
    }

    #[test]
    fn gp_count_invariant_under_two_moves() {
        for word in crate::weyl::enumerate_reduced_words(3).unwrap() {
            let count = enumerate_rigorous_paths(&WiringDiagram::build(&word)).len();
            for nb in word.two_move_neighbors() {
                let count2 = enumerate_rigorous_paths(&WiringDiagram::build(&nb)).len();
                assert_eq!(count, count2);
            }
        }
    }
}
