use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::covers::{intersect_components, Component};
use crate::error::{Error, Result};
use crate::geometry::{Conic, ProjLine, ProjPoint};
use crate::numeric::Tolerances;

/// A class of singular points: the degrees of the components through the
/// point and, for every pair of them, their degrees and local intersection
/// multiplicity; with the number of such points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointClass {
    pub degrees: Vec<u32>,
    pub contacts: Vec<(u32, u32, usize)>,
    pub count: usize,
}

/// Canonical summary of the combinatorics of a conic-line arrangement.
///
/// Two arrangements with different signatures have different combinatorial
/// types. The converse is not claimed in general; for the arrangements
/// built here the signature records every datum the incidence argument
/// uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CombSignature {
    pub degrees: Vec<u32>,
    pub points: Vec<PointClass>,
}

impl CombSignature {
    pub fn point_count(&self) -> usize {
        self.points.iter().map(|p| p.count).sum()
    }

    pub fn summary(&self) -> String {
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|p| {
                let c: Vec<String> = p.contacts.iter().map(|(a, b, m)| format!("{a}{b}:{m}")).collect();
                format!("{}x[{}]", p.count, c.join(" "))
            })
            .collect();
        format!("degrees {:?}; {}", self.degrees, pts.join(", "))
    }
}

struct Cluster {
    point: ProjPoint,
    comps: Vec<usize>,
    contacts: Vec<(usize, usize, usize)>,
}

/// Intersect every pair of components, group coincident points and
/// summarize.
///
/// Points closer than `tol.point()` are the same point; points farther
/// than `tol.cluster()` are distinct; anything in between cannot be
/// decided and is reported as [`Error::PrecisionExhausted`].
pub fn comb_signature(components: &[Component], tol: &Tolerances) -> Result<CombSignature> {
    let mut clusters: Vec<Cluster> = Vec::new();
    for i in 0..components.len() {
        for j in (i + 1)..components.len() {
            let pts = intersect_components(&components[i], &components[j], tol).map_err(|e| match e {
                Error::NotNodal(m) => Error::InvalidInput(format!("arrangement is not reduced: {m}")),
                e => e,
            })?;
            for (p, m) in pts {
                let mut hit = None;
                for (k, c) in clusters.iter().enumerate() {
                    let d = c.point.distance(&p);
                    if d < tol.point() {
                        hit = Some(k);
                        break;
                    }
                    if d < tol.cluster() {
                        return Err(Error::PrecisionExhausted(format!(
                            "cannot decide whether two singular points at distance {d:.3e} coincide"
                        )));
                    }
                }
                let k = hit.unwrap_or_else(|| {
                    clusters.push(Cluster {
                        point: p.clone(),
                        comps: Vec::new(),
                        contacts: Vec::new(),
                    });
                    clusters.len() - 1
                });
                let c = &mut clusters[k];
                for x in [i, j] {
                    if !c.comps.contains(&x) {
                        c.comps.push(x);
                    }
                }
                c.contacts.push((i, j, m));
            }
        }
    }
    let deg = |i: usize| components[i].degree();
    let mut classes: BTreeMap<(Vec<u32>, Vec<(u32, u32, usize)>), usize> = BTreeMap::new();
    for c in &clusters {
        let mut degrees: Vec<u32> = c.comps.iter().map(|&i| deg(i)).collect();
        degrees.sort_unstable();
        let mut contacts: Vec<(u32, u32, usize)> = c
            .contacts
            .iter()
            .map(|&(i, j, m)| (deg(i).min(deg(j)), deg(i).max(deg(j)), m))
            .collect();
        contacts.sort_unstable();
        *classes.entry((degrees, contacts)).or_default() += 1;
    }
    let mut degrees: Vec<u32> = components.iter().map(|c| c.degree()).collect();
    degrees.sort_unstable();
    Ok(CombSignature {
        degrees,
        points: classes
            .into_iter()
            .map(|((degrees, contacts), count)| PointClass {
                degrees,
                contacts,
                count,
            })
            .collect(),
    })
}

/// The incidence facts behind the equality of combinatorial types of the
/// arrangements `C1 + C2 + L_1 + ... + L_2m + T_i + T_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaAudit {
    /// No three of the lines `L_k`, `T_j` pass through one point.
    pub no_three_concurrent: bool,
    /// No `L_k` meets a `T_j` on `C1` or `C2`.
    pub no_transverse_bitangent_meeting_on_conics: bool,
    /// No two of the lines meet on `C2` (they are distinct tangents of it).
    pub no_meeting_on_c2: bool,
}

impl LemmaAudit {
    pub fn holds(&self) -> bool {
        self.no_three_concurrent && self.no_transverse_bitangent_meeting_on_conics && self.no_meeting_on_c2
    }
}

/// Check the incidence facts for transverse lines `transverse` and
/// bitangent lines `bitangents`. Every decision requires a margin of
/// `tol.point()`.
pub fn lemma_audit(
    c1: &Conic,
    c2: &Conic,
    transverse: &[ProjLine],
    bitangents: &[ProjLine],
    tol: &Tolerances,
) -> LemmaAudit {
    let all: Vec<(&ProjLine, bool)> = transverse
        .iter()
        .map(|l| (l, true))
        .chain(bitangents.iter().map(|l| (l, false)))
        .collect();
    let t = tol.point();
    let mut audit = LemmaAudit {
        no_three_concurrent: true,
        no_transverse_bitangent_meeting_on_conics: true,
        no_meeting_on_c2: true,
    };
    for a in 0..all.len() {
        for b in (a + 1)..all.len() {
            let (la, ta) = all[a];
            let (lb, tb) = all[b];
            if la.distance(lb) < t {
                audit.no_three_concurrent = false;
                continue;
            }
            let p = la.meet(lb).normalized();
            if (0..all.len()).any(|c| c != a && c != b && all[c].0.incidence(&p) < t) {
                audit.no_three_concurrent = false;
            }
            let on_c1 = c1.incidence(&p) < t;
            let on_c2 = c2.incidence(&p) < t;
            if on_c2 {
                audit.no_meeting_on_c2 = false;
            }
            if ta != tb && (on_c1 || on_c2) {
                audit.no_transverse_bitangent_meeting_on_conics = false;
            }
        }
    }
    audit
}
