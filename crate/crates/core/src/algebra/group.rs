use std::fmt;
use std::hash::{Hash, Hasher};

use crate::report::Report;
use crate::{Error, Result};

/// Element id inside a [`FiniteGroup`]; `0` is always the identity.
pub type Elem = usize;

/// Largest order accepted by [`FiniteGroup::canonical_form`], which walks all
/// relabelings fixing the identity.
pub const CANONICAL_FORM_MAX_ORDER: usize = 9;

/// A finite group given by its full multiplication table.
///
/// Elements are `0..order` and `0` is the identity. Values of this type
/// always satisfy the group axioms; raw tables go through
/// [`validate_group`] first.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Elem>,
    inverses: Vec<Elem>,
    label: Option<String>,
}

/// Checks a raw table against the group axioms.
///
/// Malformed shapes (empty table, ragged rows, entries out of range) are a
/// structural error; axiom failures are returned as violations.
pub fn validate_group(order: usize, rows: &[Vec<Elem>]) -> Result<Report> {
    if order == 0 {
        return Err(Error::Structural("group order must be positive".into()));
    }
    if rows.len() != order {
        return Err(Error::Structural(format!(
            "table has {} rows, expected {order}",
            rows.len()
        )));
    }
    for (a, row) in rows.iter().enumerate() {
        if row.len() != order {
            return Err(Error::Structural(format!(
                "row {a} has {} entries, expected {order}",
                row.len()
            )));
        }
        if let Some(&bad) = row.iter().find(|&&x| x >= order) {
            return Err(Error::Structural(format!(
                "row {a} contains element {bad} outside 0..{order}"
            )));
        }
    }

    let mut report = Report::new();
    for b in 0..order {
        if rows[0][b] != b {
            report.push("identity", vec![0, b], format!("0·{b} = {} ≠ {b}", rows[0][b]));
        }
        if rows[b][0] != b {
            report.push("identity", vec![b, 0], format!("{b}·0 = {} ≠ {b}", rows[b][0]));
        }
    }
    let mut seen = vec![false; order];
    for (a, row) in rows.iter().enumerate() {
        seen.iter_mut().for_each(|s| *s = false);
        row.iter().for_each(|&x| seen[x] = true);
        if seen.iter().any(|s| !s) {
            report.push("latin-row", vec![a], format!("row {a} not a permutation"));
        }
    }
    for b in 0..order {
        seen.iter_mut().for_each(|s| *s = false);
        rows.iter().for_each(|row| seen[row[b]] = true);
        if seen.iter().any(|s| !s) {
            report.push("latin-column", vec![b], format!("column {b} not a permutation"));
        }
    }
    for a in 0..order {
        for b in 0..order {
            let ab = rows[a][b];
            for c in 0..order {
                let lhs = rows[ab][c];
                let rhs = rows[a][rows[b][c]];
                if lhs != rhs {
                    report.push(
                        "associativity",
                        vec![a, b, c],
                        format!("({a}·{b})·{c} = {lhs} but {a}·({b}·{c}) = {rhs}"),
                    );
                }
            }
        }
    }
    Ok(report)
}

impl FiniteGroup {
    /// Builds a group from table rows, rejecting anything that is not a group.
    pub fn from_rows(rows: Vec<Vec<Elem>>, label: Option<String>) -> Result<Self> {
        let order = rows.len();
        let report = validate_group(order, &rows)?;
        if !report.is_ok() {
            return Err(Error::invalid("group", report));
        }
        Ok(Self::from_flat_unchecked(order, rows.concat(), label))
    }

    fn from_flat_unchecked(order: usize, table: Vec<Elem>, label: Option<String>) -> Self {
        let mut inverses = vec![0; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverses[a] = b;
                    break;
                }
            }
        }
        Self {
            order,
            table,
            inverses,
            label,
        }
    }

    /// Builds the group on `0..order` with multiplication `op`, which must be
    /// a group law with identity `0`.
    pub fn from_fn(
        order: usize,
        label: impl Into<String>,
        op: impl Fn(Elem, Elem) -> Elem,
    ) -> Result<Self> {
        let rows = (0..order)
            .map(|a| (0..order).map(|b| op(a, b)).collect())
            .collect();
        Self::from_rows(rows, Some(label.into()))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// ℤ/n with `k` represented by element `k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_flat_unchecked(n, table, Some(format!("Z{n}")))
    }

    /// Direct product with `(a, b)` encoded as `a * |right| + b`.
    pub fn direct_product(left: &FiniteGroup, right: &FiniteGroup) -> Self {
        let m = right.order;
        let n = left.order * m;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let a = left.mul(x / m, y / m);
                let b = right.mul(x % m, y % m);
                table.push(a * m + b);
            }
        }
        let label = match (&left.label, &right.label) {
            (Some(l), Some(r)) => Some(format!("{l}x{r}")),
            _ => None,
        };
        Self::from_flat_unchecked(n, table, label)
    }

    /// Dihedral group of order `2n`: element `r^k` is `k`, `s r^k` is `n + k`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let decode = |x: usize| (x / n, x % n);
        let op = |x: usize, y: usize| {
            let (s1, k1) = decode(x);
            let (s2, k2) = decode(y);
            // s^a r^b s^c r^d = s^(a+c) r^((-1)^c b + d)
            let k = if s2 == 0 { (k1 + k2) % n } else { (n - k1 + k2) % n };
            ((s1 + s2) % 2) * n + k
        };
        let table = (0..4 * n * n).map(|i| op(i / (2 * n), i % (2 * n))).collect();
        Self::from_flat_unchecked(2 * n, table, Some(format!("D{n}")))
    }

    /// Symmetric group on `n ≤ 5` letters, elements in lexicographic order of
    /// their one-line notation (so `0` is the identity permutation).
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=5).contains(&n), "symmetric group too large");
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q.as_slice() == p).unwrap();
        let order = perms.len();
        let mut table = Vec::with_capacity(order * order);
        for a in &perms {
            for b in &perms {
                // (a·b)(i) = a(b(i)): b acts first
                let c: Vec<usize> = (0..n).map(|i| a[b[i]]).collect();
                table.push(index(&c));
            }
        }
        Self::from_flat_unchecked(order, table, Some(format!("S{n}")))
    }

    /// Quaternion group Q8 as ±1, ±i, ±j, ±k with `x = 4·sign + unit`.
    pub fn quaternion() -> Self {
        // unit products in {1,i,j,k} = 0..4 with sign bit
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let op = |x: usize, y: usize| {
            let (sx, ux) = (x / 4, x % 4);
            let (sy, uy) = (y / 4, y % 4);
            let (s, u) = UNIT[ux][uy];
            ((sx + sy + s) % 2) * 4 + u
        };
        let table = (0..64).map(|i| op(i / 8, i % 8)).collect();
        Self::from_flat_unchecked(8, table, Some("Q8".into()))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn without_label(mut self) -> Self {
        self.label = None;
        self
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a]
    }

    /// `a · x · a⁻¹`
    #[inline]
    pub fn conj(&self, a: Elem, x: Elem) -> Elem {
        self.mul(self.mul(a, x), self.inverses[a])
    }

    pub fn contains(&self, x: Elem) -> bool {
        x < self.order
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &[Elem]) -> Vec<bool> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    stack.push(y);
                }
            }
        }
        member
    }

    /// Generators chosen greedily: each one is the least element outside the
    /// subgroup generated by the previous ones.
    pub fn greedy_generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut member = self.generated_subgroup(&gens);
        while let Some(next) = member.iter().position(|m| !m) {
            gens.push(next);
            member = self.generated_subgroup(&gens);
        }
        gens
    }

    /// Relabels elements through `perm` (`perm[old] = new`, `perm[0] = 0`).
    pub fn relabel(&self, perm: &[Elem]) -> Result<Self> {
        let n = self.order;
        if perm.len() != n || perm.first() != Some(&0) {
            return Err(Error::Structural("relabeling must fix the identity".into()));
        }
        let mut inverse = vec![usize::MAX; n];
        for (old, &new) in perm.iter().enumerate() {
            if new >= n || inverse[new] != usize::MAX {
                return Err(Error::Structural("relabeling is not a bijection".into()));
            }
            inverse[new] = old;
        }
        let table = (0..n * n)
            .map(|i| perm[self.mul(inverse[i / n], inverse[i % n])])
            .collect();
        Ok(Self::from_flat_unchecked(n, table, self.label.clone()))
    }

    /// The lexicographically least table over all relabelings fixing `0`.
    ///
    /// Two groups are isomorphic iff their canonical forms are equal.
    pub fn canonical_form(&self) -> Result<Self> {
        let n = self.order;
        if n > CANONICAL_FORM_MAX_ORDER {
            return Err(Error::TooLarge(format!(
                "canonical form limited to order ≤ {CANONICAL_FORM_MAX_ORDER}, got {n}"
            )));
        }
        let mut best: Option<Vec<Elem>> = None;
        for tail in permutations(n.saturating_sub(1)) {
            let perm: Vec<Elem> = std::iter::once(0).chain(tail.iter().map(|&x| x + 1)).collect();
            let mut inverse = vec![0; n];
            for (old, &new) in perm.iter().enumerate() {
                inverse[new] = old;
            }
            let candidate: Vec<Elem> = (0..n * n)
                .map(|i| perm[self.mul(inverse[i / n], inverse[i % n])])
                .collect();
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
        Ok(Self::from_flat_unchecked(n, best.unwrap_or_default(), None))
    }
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                current.push(x);
                go(n, current, used, out);
                current.pop();
                used[x] = false;
            }
        }
    }
    go(n, &mut current, &mut used, &mut out);
    out
}

impl PartialEq for FiniteGroup {
    /// Labels are presentation only; equality is equality of tables.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl Hash for FiniteGroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order.hash(state);
        self.table.hash(state);
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}
