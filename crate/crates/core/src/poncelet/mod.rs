//! Poncelet transverses: iteration, closure, degeneracy classification and
//! the search for periodic conic pairs.

mod census;
mod search;

pub use census::{census, degenerate_pairing, BitangentPairing, Census};
pub use search::{closure_defect, default_bracket, find_periodic_pair, NestedEllipseFamily, PairFamily, SearchResult};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    bitangents, intersect_conics, is_transversal, other_intersection, tangent_lines_from_point, Bitangent,
    Conic, ProjLine, ProjPoint,
};
use crate::numeric::{CertNumber, Tolerances};

/// Degeneracy type of a closed transverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Degeneracy {
    NonDegenerate,
    /// Reflected at two bitangent lines.
    TwoBitangents,
    /// Reflected at the tangents to `C2` at two nodes.
    TwoNodeTangents,
    /// One bitangent and one node tangent (odd period).
    Mixed,
}

/// A conic pair admitting a closed Poncelet transverse.
#[derive(Clone, Debug)]
pub struct PonceletPair {
    pub c1: Conic,
    pub c2: Conic,
    pub period: usize,
    pub nodes: Vec<ProjPoint>,
    pub bitangents: Vec<Bitangent>,
    /// Indices into `bitangents`; after [`PonceletPair::with_pairing`] it is
    /// `[[0, 1], [2, 3]]`.
    pub pairing: Option<[[usize; 2]; 2]>,
    pub tol: Tolerances,
}

impl PonceletPair {
    /// Compute nodes and bitangents and check the nodes are simple.
    pub fn new(c1: Conic, c2: Conic, period: usize, tol: Tolerances) -> Result<Self> {
        if c1.is_singular(tol.zero) || c2.is_singular(tol.zero) {
            return Err(Error::SingularConic);
        }
        let nodes = intersect_conics(&c1, &c2, &tol)?;
        if !is_transversal(&nodes) {
            return Err(Error::ValidationFailed("the conics are not transversal".into()));
        }
        let bitangents = bitangents(&c1, &c2, &tol)?;
        Ok(PonceletPair {
            c1,
            c2,
            period,
            nodes: nodes.into_iter().map(|n| n.0).collect(),
            bitangents,
            pairing: None,
            tol,
        })
    }

    pub fn precision(&self) -> usize {
        self.c1.precision().max(self.c2.precision())
    }

    /// Relabel the bitangents so the given pairing becomes `{T1, T2}`,
    /// `{T3, T4}`.
    pub fn with_pairing(mut self, pairing: [[usize; 2]; 2]) -> Self {
        let order = [pairing[0][0], pairing[0][1], pairing[1][0], pairing[1][1]];
        let old = self.bitangents.clone();
        self.bitangents = order.iter().map(|&i| old[i].clone()).collect();
        self.pairing = Some([[0, 1], [2, 3]]);
        self
    }

    /// Starting line at an origin on `C1`: the tangent that also touches
    /// `C1` there when one exists, the node tangent at a node, and otherwise
    /// the first tangent in the deterministic order.
    pub fn initial_line(&self, origin: &ProjPoint) -> ProjLine {
        let lines = tangent_lines_from_point(origin, &self.c2, &self.tol);
        lines
            .iter()
            .min_by(|a, b| self.c1.tangency(a).partial_cmp(&self.c1.tangency(b)).unwrap())
            .filter(|l| self.c1.tangency(l) < self.tol.point())
            .unwrap_or(&lines[0])
            .clone()
    }
}

/// A Poncelet sequence `(P_0, L_0), (P_1, L_1), ...`.
#[derive(Clone, Debug)]
pub struct Transverse {
    pub steps: Vec<(ProjPoint, ProjLine)>,
    pub closed: bool,
    pub period: Option<usize>,
    pub degeneracy: Degeneracy,
    /// Positions `j` at which the sequence reflects (see [`classify_degenerate`]).
    pub reflections: Vec<usize>,
    /// Distance between the first step and its return.
    pub closure_defect: f64,
}

/// Tolerance for consecutive repetition of a point or line in a closed
/// transverse; distinct vertices of a non-degenerate polygon are far apart.
fn repeat_tol(tol: &Tolerances) -> f64 {
    tol.point() * 10.0
}

fn check_step_input(pair: &PonceletPair, p: &ProjPoint, l: &ProjLine) -> Result<()> {
    let t = pair.tol.point();
    if !pair.c1.contains(p, t) {
        return Err(Error::IncidenceViolation(format!("{p:?} is not on C1")));
    }
    if !l.contains(p, t) {
        return Err(Error::IncidenceViolation(format!("{p:?} is not on {l:?}")));
    }
    if !pair.c2.is_tangent(l, t) {
        return Err(Error::IncidenceViolation(format!("{l:?} is not tangent to C2")));
    }
    Ok(())
}

/// The tangent to `C2` through `p` other than `l` (or `l` itself at a point
/// of `C2`).
fn other_tangent(pair: &PonceletPair, p: &ProjPoint, l: &ProjLine) -> ProjLine {
    if pair.c2.contains(p, pair.tol.point()) {
        return l.clone();
    }
    let ts = tangent_lines_from_point(p, &pair.c2, &pair.tol);
    ts.into_iter()
        .max_by(|a, b| a.distance(l).partial_cmp(&b.distance(l)).unwrap())
        .expect("at least one tangent")
}

/// One step of the transverse: `P' = L . C1 - P`, then `L'` the other tangent
/// from `P'` to `C2`.
pub fn transverse_step(pair: &PonceletPair, p: &ProjPoint, l: &ProjLine) -> Result<(ProjPoint, ProjLine)> {
    check_step_input(pair, p, l)?;
    let q = other_intersection(l, &pair.c1, p, &pair.tol)?;
    let m = other_tangent(pair, &q, l);
    Ok((q, m))
}

/// Inverse of [`transverse_step`]: swap the tangent first, then the point.
pub fn reverse_step(pair: &PonceletPair, p: &ProjPoint, l: &ProjLine) -> Result<(ProjPoint, ProjLine)> {
    check_step_input(pair, p, l)?;
    let m = other_tangent(pair, p, l);
    let q = other_intersection(&m, &pair.c1, p, &pair.tol)?;
    Ok((q, m))
}

/// Iterate from `origin` until the (point, line) pair returns to the first
/// step.
pub fn trace(pair: &PonceletPair, origin: &ProjPoint, max_steps: usize) -> Result<Transverse> {
    let l0 = pair.initial_line(origin);
    trace_from(pair, origin, &l0, max_steps)
}

/// As [`trace`] with an explicit starting line.
pub fn trace_from(pair: &PonceletPair, origin: &ProjPoint, l0: &ProjLine, max_steps: usize) -> Result<Transverse> {
    let close = pair.tol.closure;
    let mut steps = vec![(origin.normalized(), l0.normalized())];
    let (mut p, mut l) = steps[0].clone();
    for k in 1..=max_steps {
        let (q, m) = transverse_step(pair, &p, &l)?;
        let dp = q.distance(&steps[0].0);
        let dl = m.distance(&steps[0].1);
        if dp < close && dl < close {
            let mut t = Transverse {
                steps,
                closed: true,
                period: Some(k),
                degeneracy: Degeneracy::NonDegenerate,
                reflections: Vec::new(),
                closure_defect: dp.max(dl),
            };
            let (d, r) = classify_degenerate(&t, pair)?;
            t.degeneracy = d;
            t.reflections = r;
            return Ok(t);
        }
        p = q;
        l = m;
        steps.push((p.clone(), l.clone()));
    }
    Err(Error::NoClosure { max_steps })
}

/// Classify a closed transverse by its reflection positions.
///
/// A position `j` with `P_{j+1} = P_j` is a reflection at the bitangent
/// `L_j`; a position with `L_{j+1} = L_j` is a reflection at the tangent to
/// `C2` at the node `P_{j+1}`. Beyond the labels, the doubling structure is
/// checked: the lines other than bitangent reflection lines occur exactly
/// twice.
pub fn classify_degenerate(t: &Transverse, pair: &PonceletPair) -> Result<(Degeneracy, Vec<usize>)> {
    if !t.closed {
        return Err(Error::MalformedTransverse("transverse is not closed".into()));
    }
    let n = t.steps.len();
    let rt = repeat_tol(&pair.tol);
    let mut point_rep = Vec::new();
    let mut line_rep = Vec::new();
    for j in 0..n {
        let (p, l) = &t.steps[j];
        let (q, m) = &t.steps[(j + 1) % n];
        if p.distance(q) < rt {
            point_rep.push(j);
        }
        if l.distance(m) < rt {
            line_rep.push(j);
        }
    }
    let kind = match (point_rep.len(), line_rep.len()) {
        (0, 0) => Degeneracy::NonDegenerate,
        (2, 0) => Degeneracy::TwoBitangents,
        (0, 2) => Degeneracy::TwoNodeTangents,
        (1, 1) => Degeneracy::Mixed,
        (a, b) => {
            return Err(Error::MalformedTransverse(format!(
                "{a} point repetitions and {b} line repetitions"
            )))
        }
    };
    if kind == Degeneracy::NonDegenerate {
        return Ok((kind, Vec::new()));
    }
    let expected_parity = match kind {
        Degeneracy::Mixed => 1,
        _ => 0,
    };
    if n % 2 != expected_parity {
        return Err(Error::MalformedTransverse(format!("{kind:?} with period {n}")));
    }
    for &j in &point_rep {
        if !pair.c1.is_tangent(&t.steps[j].1, rt) {
            return Err(Error::MalformedTransverse(format!("reflection line at {j} is not a bitangent")));
        }
    }
    for &j in &line_rep {
        if !pair.c2.contains(&t.steps[(j + 1) % n].0, rt) {
            return Err(Error::MalformedTransverse(format!("reflection at {j} is not at a node")));
        }
    }
    // multiplicity of every line in the cyclic sequence
    let lines: Vec<&ProjLine> = t.steps.iter().map(|s| &s.1).collect();
    let mult = |i: usize| lines.iter().filter(|m| m.distance(lines[i]) < rt).count();
    for i in 0..n {
        let expected = if point_rep.contains(&i) { 1 } else { 2 };
        if mult(i) != expected {
            return Err(Error::MalformedTransverse(format!(
                "line at position {i} occurs {} times, expected {expected}",
                mult(i)
            )));
        }
    }
    let mut refl: Vec<usize> = point_rep.into_iter().chain(line_rep).collect();
    refl.sort_unstable();
    Ok((kind, refl))
}

impl Transverse {
    pub fn lines(&self) -> Vec<ProjLine> {
        self.steps.iter().map(|s| s.1.clone()).collect()
    }

    pub fn points(&self) -> Vec<ProjPoint> {
        self.steps.iter().map(|s| s.0.clone()).collect()
    }

    /// Distinct lines up to `tol`, in order of first appearance.
    pub fn distinct_lines(&self, tol: f64) -> Vec<ProjLine> {
        dedup(self.lines(), tol)
    }

    pub fn distinct_points(&self, tol: f64) -> Vec<ProjPoint> {
        let mut out: Vec<ProjPoint> = Vec::new();
        for p in self.points() {
            if !out.iter().any(|q| q.distance(&p) < tol) {
                out.push(p);
            }
        }
        out
    }
}

fn dedup(lines: Vec<ProjLine>, tol: f64) -> Vec<ProjLine> {
    let mut out: Vec<ProjLine> = Vec::new();
    for l in lines {
        if !out.iter().any(|m| m.distance(&l) < tol) {
            out.push(l);
        }
    }
    out
}

/// A point of `C1` at a real chart parameter, used for generic origins.
pub fn origin_at(pair: &PonceletPair, t: f64) -> Result<ProjPoint> {
    use crate::geometry::{parametrize_avoiding, CurveParam};
    let f2 = pair.c2.form();
    let param = parametrize_avoiding(&pair.c1, &[&f2], &pair.tol)?;
    Ok(param.point_at(&CertNumber::from_f64(t, pair.precision())).normalized())
}
