#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use gpdcoh::algebra::{FiniteGroup, FiniteGroupoid, GroupFamily};

pub fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn inputs_dir() -> PathBuf {
    corpus().join("inputs")
}

pub fn blessing() -> bool {
    std::env::var_os("GPDCOH_BLESS").is_some()
}

/// Runs the binary inside the input directory; returns stdout and the exit code.
pub fn run(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_gpdcoh"))
        .args(args)
        .current_dir(inputs_dir())
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().expect("exit code"))
}

pub fn z(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n)
}

pub fn bz(n: usize) -> FiniteGroupoid {
    FiniteGroupoid::from_group(&z(n))
}

pub struct Instance {
    pub name: &'static str,
    pub base: Arc<FiniteGroupoid>,
    pub family: Arc<GroupFamily>,
    /// corpus file names of the groupoid and family documents
    pub files: (&'static str, &'static str),
}

pub fn instances() -> Vec<Instance> {
    let mk = |name, base, groups, files| Instance {
        name,
        base: Arc::new(base),
        family: Arc::new(GroupFamily::new(groups)),
        files,
    };
    vec![
        mk("Z2 on Z2", bz(2), vec![z(2)], ("groupoid_bz2.json", "family_z2.json")),
        mk("Z2 on Z3", bz(2), vec![z(3)], ("groupoid_bz2.json", "family_z3.json")),
        mk("Z3 on Z3", bz(3), vec![z(3)], ("groupoid_bz3.json", "family_z3.json")),
        mk("interval on Z2,Z2", FiniteGroupoid::interval(), vec![z(2), z(2)], ("groupoid_interval.json", "family_z2_z2.json")),
        mk(
            "Z2+Z2 on Z2,Z3",
            FiniteGroupoid::disjoint_union(&[&bz(2), &bz(2)]),
            vec![z(2), z(3)],
            ("groupoid_bz2_bz2.json", "family_z2_z3.json"),
        ),
    ]
}

/// Every multiplication table on `0..n` with identity 0 satisfying the
/// group axioms, by filling a Latin square cell by cell.
pub fn oracle_tables(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn assoc(t: &[Vec<usize>]) -> bool {
        let n = t.len();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] == t[a][t[b][c]])))
    }
    fn fill(t: &mut Vec<Vec<usize>>, cell: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        let n = t.len();
        if cell == n * n {
            if assoc(t) {
                out.push(t.clone());
            }
            return;
        }
        let (i, j) = (cell / n, cell % n);
        if i == 0 || j == 0 {
            fill(t, cell + 1, out);
            return;
        }
        for v in 0..n {
            if (0..j).any(|k| t[i][k] == v) || (0..i).any(|k| t[k][j] == v) {
                continue;
            }
            t[i][j] = v;
            fill(t, cell + 1, out);
        }
        t[i][j] = usize::MAX;
    }
    let mut t = vec![vec![usize::MAX; n]; n];
    for k in 0..n {
        t[0][k] = k;
        t[k][0] = k;
    }
    let mut out = Vec::new();
    fill(&mut t, 0, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism of two tables by trying every bijection.
pub fn oracle_isomorphic(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let n = a.len();
    n == b.len()
        && permutations(n)
            .iter()
            .any(|p| (0..n).all(|x| (0..n).all(|y| p[a[x][y]] == b[p[x]][p[y]])))
}

/// Isomorphism classes of the given tables, as lists of indices.
pub fn oracle_classes(tables: &[Vec<Vec<usize>>]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        match classes.iter_mut().find(|c| oracle_isomorphic(&tables[c[0]], t)) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}
