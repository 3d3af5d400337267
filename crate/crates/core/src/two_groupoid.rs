//! The 2-groupoid `Aut(𝒦)` of a family of groups: 1-cells are group
//! isomorphisms `K_A → K_B`, and a 2-cell out of `f` is a pair `(f, α)`
//! with `α ∈ K_B`, whose codomain is `u ↦ α·f(u)·α⁻¹`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{all_isomorphisms, Elem, GroupFamily, GroupIso, ObjId};
use crate::report::Report;
use crate::{Error, Result};

/// Groups larger than this are refused by [`build_aut`].
pub const AUT_MAX_GROUP_ORDER: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneCell {
    pub src: ObjId,
    pub tgt: ObjId,
    pub iso: GroupIso,
}

/// A 2-cell `(dom, witness)`; its codomain 1-cell is derived, never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoCell {
    pub src: ObjId,
    pub tgt: ObjId,
    pub dom: GroupIso,
    pub witness: Elem,
}

impl TwoCell {
    pub fn identity(cell: &OneCell) -> Self {
        Self {
            src: cell.src,
            tgt: cell.tgt,
            dom: cell.iso.clone(),
            witness: 0,
        }
    }

    pub fn dom_cell(&self) -> OneCell {
        OneCell {
            src: self.src,
            tgt: self.tgt,
            iso: self.dom.clone(),
        }
    }
}

fn check_cell(family: &GroupFamily, c: &TwoCell) -> Result<()> {
    if c.src >= family.len() || c.tgt >= family.len() {
        return Err(Error::Structural(format!("2-cell endpoints {}→{} outside the family", c.src, c.tgt)));
    }
    if !family.group(c.tgt).contains(c.witness) {
        return Err(Error::Structural(format!(
            "witness {} is not an element of K_{}",
            c.witness, c.tgt
        )));
    }
    if c.dom.len() != family.group(c.src).order() {
        return Err(Error::Structural("1-cell does not start at K_src".into()));
    }
    Ok(())
}

/// `u ↦ α·f(u)·α⁻¹`
pub fn two_cell_codomain(family: &GroupFamily, c: &TwoCell) -> Result<GroupIso> {
    check_cell(family, c)?;
    let k = family.group(c.tgt);
    Ok(GroupIso::from_map_unchecked(
        c.dom.map().iter().map(|&x| k.conj(c.witness, x)).collect(),
    ))
}

/// `(g, β) ∘ (f, α) = (f, β·α)`, defined when `g` is the codomain of `(f, α)`.
pub fn vcompose(family: &GroupFamily, second: &TwoCell, first: &TwoCell) -> Result<TwoCell> {
    check_cell(family, second)?;
    let cod = two_cell_codomain(family, first)?;
    if second.src != first.src || second.tgt != first.tgt || second.dom != cod {
        return Err(Error::Mismatch("vertical composite: dom(second) ≠ cod(first)".into()));
    }
    Ok(TwoCell {
        src: first.src,
        tgt: first.tgt,
        dom: first.dom.clone(),
        witness: family.group(first.tgt).mul(second.witness, first.witness),
    })
}

/// `(g, β) * (f, α) = (g∘f, β·g(α))`, defined when `g` starts where `f` ends.
pub fn hcompose(family: &GroupFamily, second: &TwoCell, first: &TwoCell) -> Result<TwoCell> {
    check_cell(family, second)?;
    check_cell(family, first)?;
    if second.src != first.tgt {
        return Err(Error::Mismatch(format!(
            "horizontal composite: K_{} ≠ K_{}",
            second.src, first.tgt
        )));
    }
    let g = &second.dom;
    Ok(TwoCell {
        src: first.src,
        tgt: second.tgt,
        dom: g.after(&first.dom),
        witness: family.group(second.tgt).mul(second.witness, g.apply(first.witness)),
    })
}

/// `(f, α)⁻¹ = (α f α⁻¹, α⁻¹)`
pub fn two_cell_vinverse(family: &GroupFamily, c: &TwoCell) -> Result<TwoCell> {
    Ok(TwoCell {
        src: c.src,
        tgt: c.tgt,
        dom: two_cell_codomain(family, c)?,
        witness: family.group(c.tgt).inv(c.witness),
    })
}

/// Horizontal inverse of `α: f → g`, computed both as `f⁻¹ * α⁻¹ * g⁻¹` and
/// as `g⁻¹ * α⁻¹ * f⁻¹`; the two must agree.
pub fn two_cell_hinverse(family: &GroupFamily, c: &TwoCell) -> Result<TwoCell> {
    let g = two_cell_codomain(family, c)?;
    let vinv = two_cell_vinverse(family, c)?;
    let id_on = |iso: GroupIso, src, tgt| TwoCell { src, tgt, dom: iso, witness: 0 };
    let f_inv = id_on(c.dom.inverse(), c.tgt, c.src);
    let g_inv = id_on(g.inverse(), c.tgt, c.src);
    let via_f = hcompose(family, &f_inv, &hcompose(family, &vinv, &g_inv)?)?;
    let via_g = hcompose(family, &g_inv, &hcompose(family, &vinv, &f_inv)?)?;
    if via_f != via_g {
        return Err(Error::Theorem(format!(
            "horizontal inverse formulas disagree: {via_f:?} vs {via_g:?}"
        )));
    }
    Ok(via_f)
}

/// `Aut(𝒦)` with all cells materialized.
#[derive(Clone, Debug)]
pub struct AutTwoGroupoid {
    family: Arc<GroupFamily>,
    one_cells: Vec<OneCell>,
    index: HashMap<OneCell, usize>,
    identities: Vec<usize>,
    two_cells: Vec<TwoCell>,
}

impl AutTwoGroupoid {
    pub fn family(&self) -> &Arc<GroupFamily> {
        &self.family
    }

    pub fn num_objects(&self) -> usize {
        self.family.len()
    }

    /// All 1-cells, sorted by `(src, tgt, map)`.
    pub fn one_cells(&self) -> &[OneCell] {
        &self.one_cells
    }

    pub fn one_cell(&self, i: usize) -> &OneCell {
        &self.one_cells[i]
    }

    pub fn one_cell_index(&self, cell: &OneCell) -> Option<usize> {
        self.index.get(cell).copied()
    }

    pub fn find(&self, src: ObjId, tgt: ObjId, iso: &GroupIso) -> Option<usize> {
        self.one_cell_index(&OneCell { src, tgt, iso: iso.clone() })
    }

    pub fn identity(&self, o: ObjId) -> usize {
        self.identities[o]
    }

    /// 1-cells `K_a → K_b`.
    pub fn hom(&self, a: ObjId, b: ObjId) -> impl Iterator<Item = usize> + '_ {
        self.one_cells
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.src == a && c.tgt == b)
            .map(|(i, _)| i)
    }

    pub fn two_cells(&self) -> &[TwoCell] {
        &self.two_cells
    }

    /// `g ∘ f` as 1-cell indices.
    pub fn compose_one(&self, g: usize, f: usize) -> Option<usize> {
        let (g, f) = (&self.one_cells[g], &self.one_cells[f]);
        if g.src != f.tgt {
            return None;
        }
        self.find(f.src, g.tgt, &g.iso.after(&f.iso))
    }

    pub fn inverse_one(&self, f: usize) -> usize {
        let c = &self.one_cells[f];
        self.find(c.tgt, c.src, &c.iso.inverse())
            .expect("Aut(𝒦) contains all inverses")
    }

    /// Checks the 2-groupoid structure: every 1-cell has an inverse 1-cell,
    /// every 2-cell has a vertical inverse with the right boundary.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let fam = &*self.family;
        for (i, c) in self.one_cells.iter().enumerate() {
            if !c.iso.is_iso(fam.group(c.src), fam.group(c.tgt)) {
                report.push("one-cell", vec![i], format!("1-cell {i} is not an isomorphism"));
            }
            if self.find(c.tgt, c.src, &c.iso.inverse()).is_none() {
                report.push("one-cell-inverse", vec![i], format!("1-cell {i} has no inverse"));
            }
        }
        for (i, c) in self.two_cells.iter().enumerate() {
            let ok = two_cell_vinverse(fam, c).and_then(|inv| {
                let there = vcompose(fam, &inv, c)?;
                let back = vcompose(fam, c, &inv)?;
                Ok(there == TwoCell::identity(&c.dom_cell()) && back.witness == 0)
            });
            if !matches!(ok, Ok(true)) {
                report.push("two-cell-inverse", vec![i], format!("2-cell {i} has no vertical inverse"));
            }
        }
        report
    }
}

/// Materializes `Aut(𝒦)`: all isomorphisms between family members and all
/// 2-cells on them.
pub fn build_aut(family: Arc<GroupFamily>) -> Result<AutTwoGroupoid> {
    if let Some(g) = family.groups().iter().find(|g| g.order() > AUT_MAX_GROUP_ORDER) {
        return Err(Error::TooLarge(format!(
            "Aut(𝒦) needs groups of order ≤ {AUT_MAX_GROUP_ORDER}, got {}",
            g.order()
        )));
    }
    let n = family.len();
    let mut one_cells = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for iso in all_isomorphisms(family.group(a), family.group(b)) {
                one_cells.push(OneCell { src: a, tgt: b, iso });
            }
        }
    }
    one_cells.sort();
    let index: HashMap<OneCell, usize> = one_cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let identities = (0..n)
        .map(|o| {
            index[&OneCell {
                src: o,
                tgt: o,
                iso: GroupIso::identity(family.group(o).order()),
            }]
        })
        .collect();
    let two_cells = one_cells
        .iter()
        .flat_map(|c| {
            family.group(c.tgt).elements().map(move |w| TwoCell {
                src: c.src,
                tgt: c.tgt,
                dom: c.iso.clone(),
                witness: w,
            })
        })
        .collect();
    let aut = AutTwoGroupoid {
        family,
        one_cells,
        index,
        identities,
        two_cells,
    };
    aut.validate().into_result("Aut(𝒦)", aut)
}
