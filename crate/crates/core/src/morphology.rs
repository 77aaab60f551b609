//! Mathematical morphology on finite relations and hypergraphs.
//!
//! Dilation `X ⊕ R` collects the `R`-successors of `X`; erosion `R ⊖ X` keeps
//! the states all of whose `R`-successors lie in `X`. They form a Galois
//! connection, and in an H-model they are exactly the truth sets of `◆p` and
//! `□p` (see [`modal_morphology_bridge`]).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::Formula;
use crate::kripke::{is_h_set, is_stable, stability_closure, HFrame, HModel, Relation, StateSet};
use crate::semantics::truth_set;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphError {
    #[error("set over {set} states used with relation over {relation} states")]
    SizeMismatch { set: usize, relation: usize },
    #[error("relation is not a hypergraph incidence relation")]
    NotHypergraph,
    #[error("set is not a subgraph (not closed under incidence)")]
    NotSubgraph,
    #[error("relation is not stable over the incidence relation")]
    NotStable,
    #[error("atom `{0}` has no valuation in the model")]
    UnknownAtom(String),
    #[error("modal/morphological mismatch for {0}")]
    BridgeMismatch(&'static str),
}

fn check(x: &StateSet, r: &Relation) -> Result<(), MorphError> {
    if x.universe() != r.size() {
        return Err(MorphError::SizeMismatch {
            set: x.universe(),
            relation: r.size(),
        });
    }
    Ok(())
}

/// `X ⊕ R = {u | ∃x. x R u ∧ x ∈ X}`.
pub fn dilate(x: &StateSet, r: &Relation) -> Result<StateSet, MorphError> {
    check(x, r)?;
    let n = r.size();
    Ok(StateSet::from_states(
        n,
        (0..n).filter(|&u| (0..n).any(|v| r.contains(v, u) && x.contains(v))),
    ))
}

/// `R ⊖ X = {u | ∀x. u R x ⇒ x ∈ X}`.
pub fn erode(r: &Relation, x: &StateSet) -> Result<StateSet, MorphError> {
    check(x, r)?;
    let n = r.size();
    Ok(StateSet::from_states(
        n,
        (0..n).filter(|&u| (0..n).all(|v| !r.contains(u, v) || x.contains(v))),
    ))
}

/// `(R ⊖ X) ⊕ R`.
pub fn opening(x: &StateSet, r: &Relation) -> Result<StateSet, MorphError> {
    dilate(&erode(r, x)?, r)
}

/// `R ⊖ (X ⊕ R)`.
pub fn closing(x: &StateSet, r: &Relation) -> Result<StateSet, MorphError> {
    erode(r, &dilate(x, r)?)
}

/// Reflexive, and `x H y H z` forces `x = y` or `y = z`.
pub fn is_hypergraph(h: &Relation) -> bool {
    let n = h.size();
    h.is_reflexive()
        && h.pairs().filter(|(x, y)| x != y).all(|(_, y)| {
            // y has a proper predecessor, so it must have no proper successor
            (0..n).all(|z| z == y || !h.contains(y, z))
        })
}

/// A hypergraph presented as its incidence preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    h: Relation,
}

impl Hypergraph {
    pub fn new(h: Relation) -> Result<Self, MorphError> {
        if !is_hypergraph(&h) {
            return Err(MorphError::NotHypergraph);
        }
        Ok(Hypergraph { h })
    }

    pub fn incidence(&self) -> &Relation {
        &self.h
    }

    pub fn is_subgraph(&self, x: &StateSet) -> bool {
        x.universe() == self.h.size() && is_h_set(&self.h, x)
    }
}

/// Splits the elements into edges (with a distinct incident element) and nodes.
pub fn classify(g: &Hypergraph) -> (StateSet, StateSet) {
    let h = g.incidence();
    let n = h.size();
    let edges = StateSet::from_states(n, (0..n).filter(|&u| (0..n).any(|v| v != u && h.contains(u, v))));
    let nodes = edges.complement();
    (edges, nodes)
}

/// Rejects inputs outside the graph setting: `x` must be a subgraph and `r` stable.
pub fn check_strict(g: &Hypergraph, x: &StateSet, r: &Relation) -> Result<(), MorphError> {
    check(x, r)?;
    if !g.is_subgraph(x) {
        return Err(MorphError::NotSubgraph);
    }
    if !is_stable(g.incidence(), r).map_err(|_| MorphError::SizeMismatch {
        set: x.universe(),
        relation: g.incidence().size(),
    })? {
        return Err(MorphError::NotStable);
    }
    Ok(())
}

/// Truth sets of `◆p □p ◆□p □◆p` next to the corresponding morphological sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeReport {
    pub bdia: StateSet,
    pub wbox: StateSet,
    pub bdia_wbox: StateSet,
    pub wbox_bdia: StateSet,
    pub dilation: StateSet,
    pub erosion: StateSet,
    pub opening: StateSet,
    pub closing: StateSet,
}

/// Evaluates the four modal formulas over `atom` and checks each against
/// dilation, erosion, opening and closing of `V(atom)` by `R`.
pub fn modal_morphology_bridge(m: &HModel, atom: &str) -> Result<BridgeReport, MorphError> {
    let x = m
        .valuation()
        .get(atom)
        .ok_or_else(|| MorphError::UnknownAtom(atom.to_string()))?;
    let p = Formula::atom(atom);
    let r = m.r();
    let report = BridgeReport {
        bdia: truth_set(m, &Formula::bdia(p.clone())),
        wbox: truth_set(m, &Formula::wbox(p.clone())),
        bdia_wbox: truth_set(m, &Formula::bdia(Formula::wbox(p.clone()))),
        wbox_bdia: truth_set(m, &Formula::wbox(Formula::bdia(p))),
        dilation: dilate(x, r)?,
        erosion: erode(r, x)?,
        opening: opening(x, r)?,
        closing: closing(x, r)?,
    };
    let pairs = [
        ("diamond/dilation", &report.bdia, &report.dilation),
        ("box/erosion", &report.wbox, &report.erosion),
        ("diamond-box/opening", &report.bdia_wbox, &report.opening),
        ("box-diamond/closing", &report.wbox_bdia, &report.closing),
    ];
    for (name, a, b) in pairs {
        if a != b {
            return Err(MorphError::BridgeMismatch(name));
        }
    }
    Ok(report)
}

/// Label of pixel `(x, y)` in [`grid_model`].
pub fn pixel_label(x: usize, y: usize) -> String {
    format!("n{x}_{y}")
}

/// Builds the 4-adjacency grid graph of a `width × height` image as an H-model.
///
/// Pixels are nodes `n{x}_{y}`; each pair of horizontally adjacent pixels gets
/// an edge `h{x}_{y}` and each vertically adjacent pair an edge `v{x}_{y}`,
/// incident with both pixels. `R` is the stability closure of incidence taken
/// in both directions. `V(p)` is the subgraph induced by the black pixels.
pub fn grid_model(width: usize, height: usize, black: &[(usize, usize)]) -> Result<HModel, MorphError> {
    let mut labels = Vec::new();
    let mut index = BTreeMap::new();
    for y in 0..height {
        for x in 0..width {
            index.insert(pixel_label(x, y), labels.len());
            labels.push(pixel_label(x, y));
        }
    }
    let mut incid = Vec::new();
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                incid.push((format!("h{x}_{y}"), (x, y), (x + 1, y)));
            }
            if y + 1 < height {
                incid.push((format!("v{x}_{y}"), (x, y), (x, y + 1)));
            }
        }
    }
    let node = |(x, y): (usize, usize)| y * width + x;
    let n = labels.len() + incid.len();
    let mut h = Relation::identity(n);
    let mut edge_ends = Vec::new();
    for (label, a, b) in &incid {
        let e = labels.len();
        labels.push(label.clone());
        h.insert(e, node(*a));
        h.insert(e, node(*b));
        edge_ends.push((e, node(*a), node(*b)));
    }
    let both = h.union(&h.converse()).expect("same size");
    let r = stability_closure(&h, &both).expect("same size");
    let is_black = |p: (usize, usize)| black.contains(&p);
    let mut set = StateSet::empty(n);
    for &(x, y) in black {
        if x >= width || y >= height {
            continue;
        }
        set.insert(node((x, y)));
    }
    for ((_, a, b), (e, _, _)) in incid.iter().zip(&edge_ends) {
        if is_black(*a) && is_black(*b) {
            set.insert(*e);
        }
    }
    let frame = HFrame::new(labels, h, r).expect("grid frame is an H-frame");
    let mut val = BTreeMap::new();
    val.insert("p".to_string(), set);
    Ok(HModel::new(frame, val).expect("induced subgraph is an H-set"))
}
