//! Nerves truncated at dimension 3: the nerve of a groupoid and the
//! geometric nerve of `Aut(𝒦)`, simplicial maps between them, and
//! simplicial homotopies.
//!
//! Face maps follow the usual rule: `d_i` omits vertex `i`.

mod homotopy;
mod map;

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::FiniteGroupoid;
use crate::report::Report;
use crate::two_groupoid::AutTwoGroupoid;
use crate::{Error, Result};

pub use homotopy::{
    homotopy_from_morphism, normalized_homotopic, representation_check, validate_homotopy, RepresentationReport,
    RepresentationRow, SimplicialHomotopy,
};
pub use map::{cocycle_to_map, enumerate_simplicial_maps, map_to_cocycle, validate_simplicial_map, NervePair, SimplicialMap};

/// Highest dimension kept.
pub const TOP_DIM: usize = 3;

/// Records, face tables, degeneracy tables, coskeletal degree and source.
pub type Parts = (Vec<Vec<Vec<usize>>>, Vec<Vec<Vec<usize>>>, Vec<Vec<Vec<usize>>>, Option<usize>, NerveSource);

/// What a truncated simplicial set was built from; used to recompute its
/// tables during validation.
#[derive(Clone, Debug)]
pub enum NerveSource {
    Groupoid(Arc<FiniteGroupoid>),
    Aut(Arc<AutTwoGroupoid>),
    Plain,
}

/// Simplices of dimensions `0..=3`, with records, face and degeneracy
/// tables.
///
/// Records: in the nerve of a groupoid an `n`-simplex is its chain of arrows
/// `[a1, .., an]` (`a1` first; a vertex is `[object]`). In the nerve of
/// `Aut(𝒦)` a vertex is `[object]`, an edge `[1-cell]`, a triangle
/// `[g, h, f, α]` with `f: 0→1`, `g: 1→2`, `h: 0→2` and `α` a 2-cell
/// `h ⇒ g∘f`, and a tetrahedron is the list of its four faces.
#[derive(Clone, Debug)]
pub struct TruncatedSimplicialSet {
    records: Vec<Vec<Vec<usize>>>,
    faces: Vec<Vec<Vec<usize>>>,
    degeneracies: Vec<Vec<Vec<usize>>>,
    coskeletal: Option<usize>,
    source: NerveSource,
    record_index: Vec<HashMap<Vec<usize>, usize>>,
    boundary_index: Vec<HashMap<Vec<usize>, Vec<usize>>>,
    degenerate: Vec<Vec<Option<(usize, usize)>>>,
}

impl PartialEq for TruncatedSimplicialSet {
    fn eq(&self, other: &Self) -> bool {
        self.records == other.records
            && self.faces == other.faces
            && self.degeneracies == other.degeneracies
            && self.coskeletal == other.coskeletal
    }
}

impl Eq for TruncatedSimplicialSet {}

impl TruncatedSimplicialSet {
    /// Assembles a truncated simplicial set from its tables.
    /// `faces[n][x]` lists `d_0 x, .., d_n x` (empty for `n = 0`) and
    /// `degeneracies[n][x]` lists `s_0 x, .., s_n x` for `n ≤ 2`.
    pub fn from_parts(
        records: Vec<Vec<Vec<usize>>>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
        coskeletal: Option<usize>,
        source: NerveSource,
    ) -> Result<Self> {
        if records.len() != TOP_DIM + 1 || faces.len() != TOP_DIM + 1 || degeneracies.len() != TOP_DIM {
            return Err(Error::Structural("simplicial tables must cover dimensions 0..=3".into()));
        }
        for n in 0..=TOP_DIM {
            let count = records[n].len();
            if faces[n].len() != count {
                return Err(Error::Structural(format!("face table of dimension {n} has the wrong length")));
            }
            if n > 0 {
                let below = records[n - 1].len();
                if faces[n].iter().any(|f| f.len() != n + 1 || f.iter().any(|&y| y >= below)) {
                    return Err(Error::Structural(format!("malformed faces in dimension {n}")));
                }
            } else if faces[0].iter().any(|f| !f.is_empty()) {
                return Err(Error::Structural("vertices have no faces".into()));
            }
            if n < TOP_DIM {
                let above = records[n + 1].len();
                if degeneracies[n].len() != count
                    || degeneracies[n].iter().any(|s| s.len() != n + 1 || s.iter().any(|&y| y >= above))
                {
                    return Err(Error::Structural(format!("malformed degeneracies in dimension {n}")));
                }
            }
        }
        let record_index = records
            .iter()
            .map(|level| level.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect())
            .collect();
        let boundary_index = faces
            .iter()
            .map(|level| {
                let mut idx: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
                for (x, f) in level.iter().enumerate() {
                    idx.entry(f.clone()).or_default().push(x);
                }
                idx
            })
            .collect();
        let mut degenerate: Vec<Vec<Option<(usize, usize)>>> = records.iter().map(|l| vec![None; l.len()]).collect();
        for n in 0..TOP_DIM {
            for (z, s) in degeneracies[n].iter().enumerate() {
                for (i, &x) in s.iter().enumerate() {
                    let slot = &mut degenerate[n + 1][x];
                    if slot.is_none_or(|(j, _)| i < j) {
                        *slot = Some((i, z));
                    }
                }
            }
        }
        Ok(Self {
            records,
            faces,
            degeneracies,
            coskeletal,
            source,
            record_index,
            boundary_index,
            degenerate,
        })
    }

    pub fn into_parts(self) -> Parts {
        (self.records, self.faces, self.degeneracies, self.coskeletal, self.source)
    }

    pub fn count(&self, n: usize) -> usize {
        self.records[n].len()
    }

    pub fn counts(&self) -> [usize; 4] {
        [self.count(0), self.count(1), self.count(2), self.count(3)]
    }

    pub fn record(&self, n: usize, x: usize) -> &[usize] {
        &self.records[n][x]
    }

    pub fn records(&self, n: usize) -> &[Vec<usize>] {
        &self.records[n]
    }

    pub fn faces_of(&self, n: usize, x: usize) -> &[usize] {
        &self.faces[n][x]
    }

    pub fn degeneracies_of(&self, n: usize, x: usize) -> &[usize] {
        &self.degeneracies[n][x]
    }

    #[inline]
    pub fn face(&self, n: usize, x: usize, i: usize) -> usize {
        self.faces[n][x][i]
    }

    #[inline]
    pub fn degeneracy(&self, n: usize, x: usize, i: usize) -> usize {
        self.degeneracies[n][x][i]
    }

    pub fn coskeletal(&self) -> Option<usize> {
        self.coskeletal
    }

    pub fn source(&self) -> &NerveSource {
        &self.source
    }

    pub fn find(&self, n: usize, record: &[usize]) -> Option<usize> {
        self.record_index[n].get(record).copied()
    }

    /// `n`-simplices with the given faces `d_0, .., d_n`.
    pub fn fillers(&self, n: usize, faces: &[usize]) -> &[usize] {
        self.boundary_index[n].get(faces).map_or(&[], Vec::as_slice)
    }

    /// `Some((i, z))` with `x = s_i z` and `i` least, if `x` is degenerate.
    pub fn degenerate_as(&self, n: usize, x: usize) -> Option<(usize, usize)> {
        self.degenerate[n][x]
    }

    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        self.degenerate[n][x].is_some()
    }

    /// Compatible boundaries of 3-simplices: quadruples of triangles with
    /// `d_i y_j = d_{j-1} y_i` for `i < j`.
    pub fn compatible_3_boundaries(&self) -> Vec<[usize; 4]> {
        let mut by_face: Vec<HashMap<usize, Vec<usize>>> = vec![HashMap::new(); 3];
        for (y, f) in self.faces[2].iter().enumerate() {
            for i in 0..3 {
                by_face[i].entry(f[i]).or_default().push(y);
            }
        }
        let d = |y: usize, i: usize| self.faces[2][y][i];
        let with = |i: usize, e: usize| by_face[i].get(&e).map_or(&[][..], Vec::as_slice);
        let mut out = Vec::new();
        for y3 in 0..self.count(2) {
            for &y2 in with(2, d(y3, 2)) {
                for &y1 in with(2, d(y3, 1)) {
                    if d(y2, 1) != d(y1, 1) {
                        continue;
                    }
                    for &y0 in with(2, d(y3, 0)) {
                        if d(y2, 0) == d(y0, 1) && d(y1, 0) == d(y0, 0) {
                            out.push([y0, y1, y2, y3]);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Checks the simplicial identities, the coskeletal flag, and (for nerves
/// that know their source) that every table entry agrees with one rebuilt
/// from the records.
pub fn validate_simplicial_set(s: &TruncatedSimplicialSet) -> Report {
    let mut report = Report::new();
    let d = |n: usize, x: usize, i: usize| s.faces[n][x][i];
    let sd = |n: usize, x: usize, i: usize| s.degeneracies[n][x][i];
    for n in 2..=TOP_DIM {
        for x in 0..s.count(n) {
            for j in 1..=n {
                for i in 0..j {
                    if d(n - 1, d(n, x, j), i) != d(n - 1, d(n, x, i), j - 1) {
                        report.push("face-face", vec![n, x, i, j], format!("d{i} d{j} ≠ d{} d{i} on {n}-simplex {x}", j - 1));
                    }
                }
            }
        }
    }
    for n in 0..TOP_DIM {
        for x in 0..s.count(n) {
            for j in 0..=n {
                let y = sd(n, x, j);
                for i in 0..=n + 1 {
                    let lhs = d(n + 1, y, i);
                    let rhs = if i < j {
                        Some(sd(n - 1, d(n, x, i), j - 1))
                    } else if i == j || i == j + 1 {
                        None
                    } else {
                        Some(sd(n - 1, d(n, x, i - 1), j))
                    };
                    let ok = match rhs {
                        None => lhs == x,
                        Some(r) => lhs == r,
                    };
                    if !ok {
                        report.push("face-degeneracy", vec![n, x, i, j], format!("d{i} s{j} identity fails on {n}-simplex {x}"));
                    }
                }
            }
        }
    }
    for n in 0..TOP_DIM - 1 {
        for x in 0..s.count(n) {
            for j in 0..=n {
                for i in 0..=j {
                    if sd(n + 1, sd(n, x, j), i) != sd(n + 1, sd(n, x, i), j + 1) {
                        report.push("degeneracy-degeneracy", vec![n, x, i, j], format!("s{i} s{j} ≠ s{} s{i} on {n}-simplex {x}", j + 1));
                    }
                }
            }
        }
    }
    match s.coskeletal {
        Some(2) => {
            let boundaries = s.compatible_3_boundaries();
            for b in &boundaries {
                let n = s.fillers(3, b).len();
                if n != 1 {
                    report.push("coskeletal", b.to_vec(), format!("boundary {b:?} has {n} fillers"));
                }
            }
            let filled: usize = boundaries.len();
            if filled != s.count(3) {
                report.push("coskeletal", vec![], format!("{} tetrahedra for {filled} compatible boundaries", s.count(3)));
            }
        }
        Some(3) => {
            for (b, xs) in &s.boundary_index[3] {
                if xs.len() > 1 {
                    report.push("coskeletal", b.clone(), format!("boundary {b:?} has {} fillers", xs.len()));
                }
            }
        }
        _ => {}
    }
    let rebuilt = match &s.source {
        NerveSource::Groupoid(g) => Some(nerve_of_groupoid(g)),
        NerveSource::Aut(a) => Some(nerve_of_aut(a)),
        NerveSource::Plain => None,
    };
    if let Some(r) = rebuilt {
        if r.records != s.records {
            report.push("record", vec![], "simplex records differ from the source");
        }
        for n in 0..=TOP_DIM {
            for (x, (a, b)) in s.faces[n].iter().zip(&r.faces[n]).enumerate() {
                if a != b {
                    report.push("record", vec![n, x], format!("faces of {n}-simplex {x} differ from its record"));
                }
            }
            if n < TOP_DIM {
                for (x, (a, b)) in s.degeneracies[n].iter().zip(&r.degeneracies[n]).enumerate() {
                    if a != b {
                        report.push("record", vec![n, x], format!("degeneracies of {n}-simplex {x} differ from its record"));
                    }
                }
            }
        }
    }
    report
}

/// Composable chains of length `n` (first arrow first), in lexicographic
/// order.
fn chains(g: &FiniteGroupoid, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return g.objects().map(|o| vec![o]).collect();
    }
    let mut out: Vec<Vec<usize>> = g.arrows().map(|a| vec![a]).collect();
    for _ in 1..n {
        out = out
            .into_iter()
            .flat_map(|c| {
                let last = *c.last().expect("nonempty chain");
                g.arrows_from(g.tgt(last)).iter().map(move |&a| {
                    let mut c = c.clone();
                    c.push(a);
                    c
                })
            })
            .collect();
    }
    out.sort();
    out
}

fn chain_face(g: &FiniteGroupoid, c: &[usize], i: usize) -> Vec<usize> {
    let n = c.len();
    if n == 1 {
        return vec![if i == 0 { g.tgt(c[0]) } else { g.src(c[0]) }];
    }
    let mut out = c.to_vec();
    if i == 0 {
        out.remove(0);
    } else if i == n {
        out.pop();
    } else {
        let composite = g.comp(c[i], c[i - 1]);
        out.splice(i - 1..=i, [composite]);
    }
    out
}

fn chain_degeneracy(g: &FiniteGroupoid, c: &[usize], dim: usize, i: usize) -> Vec<usize> {
    if dim == 0 {
        return vec![g.identity(c[0])];
    }
    let vertex = if i == 0 { g.src(c[0]) } else { g.tgt(c[i - 1]) };
    let mut out = c.to_vec();
    out.insert(i, g.identity(vertex));
    out
}

/// The nerve of a groupoid: `n`-simplices are composable `n`-chains.
pub fn nerve_of_groupoid(g: &Arc<FiniteGroupoid>) -> TruncatedSimplicialSet {
    let records: Vec<Vec<Vec<usize>>> = (0..=TOP_DIM).map(|n| chains(g, n)).collect();
    let index: Vec<HashMap<&Vec<usize>, usize>> = records
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, r)| (r, i)).collect())
        .collect();
    let mut faces = vec![vec![Vec::new(); records[0].len()]];
    for n in 1..=TOP_DIM {
        faces.push(
            records[n]
                .iter()
                .map(|c| (0..=n).map(|i| index[n - 1][&chain_face(g, c, i)]).collect())
                .collect(),
        );
    }
    let degeneracies = (0..TOP_DIM)
        .map(|n| {
            records[n]
                .iter()
                .map(|c| (0..=n).map(|i| index[n + 1][&chain_degeneracy(g, c, n, i)]).collect())
                .collect()
        })
        .collect();
    TruncatedSimplicialSet::from_parts(records, faces, degeneracies, Some(2), NerveSource::Groupoid(g.clone()))
        .expect("nerve tables are well formed")
}

/// The geometric nerve of `Aut(𝒦)` truncated at dimension 3. Tetrahedra
/// are the face quadruples `(m,l,g;ρ), (m,k,h;φ), (l,k,f;λ), (g,h,f;β)`
/// with `m(β)·φ = ρ·λ`.
pub fn nerve_of_aut(a: &Arc<AutTwoGroupoid>) -> TruncatedSimplicialSet {
    let fam = a.family();
    let r0: Vec<Vec<usize>> = (0..a.num_objects()).map(|o| vec![o]).collect();
    let r1: Vec<Vec<usize>> = (0..a.one_cells().len()).map(|i| vec![i]).collect();
    let mut r2 = Vec::new();
    for (fi, f) in a.one_cells().iter().enumerate() {
        for gi in (0..a.one_cells().len()).filter(|&i| a.one_cell(i).src == f.tgt) {
            let g = a.one_cell(gi);
            let gf = a.compose_one(gi, fi).expect("composable 1-cells");
            let k = fam.group(g.tgt);
            let gf_iso = &a.one_cell(gf).iso;
            for alpha in k.elements() {
                let inv = k.inv(alpha);
                let h_iso = crate::algebra::GroupIso::from_map_unchecked(
                    gf_iso.map().iter().map(|&y| k.conj(inv, y)).collect(),
                );
                let hi = a.find(f.src, g.tgt, &h_iso).expect("conjugate of a 1-cell is a 1-cell");
                r2.push(vec![gi, hi, fi, alpha]);
            }
        }
    }
    r2.sort();
    let idx2: HashMap<Vec<usize>, usize> = r2.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let mut by_last: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut by_first_last: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (y, r) in r2.iter().enumerate() {
        by_last.entry(r[2]).or_default().push(y);
        by_first_last.entry((r[0], r[2])).or_default().push(y);
    }
    let mut r3 = Vec::new();
    for (y3, beta_rec) in r2.iter().enumerate() {
        let (g, h, f, beta) = (beta_rec[0], beta_rec[1], beta_rec[2], beta_rec[3]);
        for &y0 in by_last.get(&g).map_or(&[][..], Vec::as_slice) {
            let (m, l, rho) = (r2[y0][0], r2[y0][1], r2[y0][3]);
            for &y2 in by_first_last.get(&(l, f)).map_or(&[][..], Vec::as_slice) {
                let (k_cell, lambda) = (r2[y2][1], r2[y2][3]);
                let grp = fam.group(a.one_cell(m).tgt);
                let m_beta = a.one_cell(m).iso.apply(beta);
                let phi = grp.mul(grp.inv(m_beta), grp.mul(rho, lambda));
                if let Some(&y1) = idx2.get(&vec![m, k_cell, h, phi]) {
                    r3.push(vec![y0, y1, y2, y3]);
                }
            }
        }
    }
    r3.sort();
    let idx3: HashMap<Vec<usize>, usize> = r3.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let f0 = vec![Vec::new(); r0.len()];
    let f1: Vec<Vec<usize>> = a.one_cells().iter().map(|c| vec![c.tgt, c.src]).collect();
    let f2: Vec<Vec<usize>> = r2.iter().map(|r| vec![r[0], r[1], r[2]]).collect();
    let f3: Vec<Vec<usize>> = r3.clone();
    let s0: Vec<Vec<usize>> = (0..a.num_objects()).map(|o| vec![a.identity(o)]).collect();
    let s1: Vec<Vec<usize>> = a
        .one_cells()
        .iter()
        .enumerate()
        .map(|(fi, c)| {
            let (id_src, id_tgt) = (a.identity(c.src), a.identity(c.tgt));
            vec![idx2[&vec![fi, fi, id_src, 0]], idx2[&vec![id_tgt, fi, fi, 0]]]
        })
        .collect();
    // faces of s_i y from the simplicial identities, then the unique filler
    let s2: Vec<Vec<usize>> = (0..r2.len())
        .map(|y| {
            (0..=2)
                .map(|i| {
                    let faces: Vec<usize> = (0..=3)
                        .map(|j| {
                            if j < i {
                                s1[f2[y][j]][i - 1]
                            } else if j == i || j == i + 1 {
                                y
                            } else {
                                s1[f2[y][j - 1]][i]
                            }
                        })
                        .collect();
                    idx3[&faces]
                })
                .collect()
        })
        .collect();
    TruncatedSimplicialSet::from_parts(
        vec![r0, r1, r2, r3],
        vec![f0, f1, f2, f3],
        vec![s0, s1, s2],
        Some(3),
        NerveSource::Aut(a.clone()),
    )
    .expect("nerve tables are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FiniteGroup, GroupFamily};
    use crate::two_groupoid::build_aut;

    fn aut(k: FiniteGroup) -> Arc<AutTwoGroupoid> {
        Arc::new(build_aut(Arc::new(GroupFamily::new(vec![k]))).unwrap())
    }

    #[test]
    fn groupoid_nerve_counts() {
        let z2 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        let n = nerve_of_groupoid(&z2);
        assert_eq!(n.counts(), [1, 2, 4, 8]);
        assert!(validate_simplicial_set(&n).is_ok());
        let i = nerve_of_groupoid(&Arc::new(FiniteGroupoid::interval()));
        assert_eq!(&i.counts()[..2], &[2, 4]);
        assert!(validate_simplicial_set(&i).is_ok());
        for o in 0..2 {
            assert_eq!(i.face(1, i.degeneracy(0, o, 0), 0), o);
        }
    }

    #[test]
    fn aut_nerve_counts() {
        let n = nerve_of_aut(&aut(FiniteGroup::cyclic(2)));
        assert_eq!(n.counts(), [1, 1, 2, 8]);
        assert!(validate_simplicial_set(&n).is_ok());
        let n = nerve_of_aut(&aut(FiniteGroup::cyclic(3)));
        assert_eq!(n.count(2), 12);
        assert!(validate_simplicial_set(&n).is_ok());
        let n = nerve_of_aut(&aut(FiniteGroup::symmetric(3)));
        assert!(validate_simplicial_set(&n).is_ok());
    }

    #[test]
    fn single_mutation_is_detected() {
        let z2 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        let (r, mut f, d, c, s) = nerve_of_groupoid(&z2).into_parts();
        f[2][3][1] ^= 1;
        let bad = TruncatedSimplicialSet::from_parts(r, f, d, c, s).unwrap();
        assert!(!validate_simplicial_set(&bad).is_ok());
    }
}
