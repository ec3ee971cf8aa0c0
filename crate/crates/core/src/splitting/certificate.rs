use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::comb::{comb_signature, CombSignature};
use super::{splitting_report, SplittingType};
use crate::covers::{BranchDivisor, Component, InducedOptions};
use crate::error::{Error, Result};
use crate::geometry::{intersect_conics, is_transversal, Conic, ProjLine};
use crate::numeric::{Config, Tolerances};

/// Two conics and a set of lines, the lines forming the branch curve.
#[derive(Clone, Debug)]
pub struct ConicLineArrangement {
    pub id: String,
    pub c1: Conic,
    pub c2: Conic,
    pub lines: Vec<ProjLine>,
}

impl ConicLineArrangement {
    pub fn components(&self) -> Vec<Component> {
        let mut out = vec![Component::Conic(self.c1.clone()), Component::Conic(self.c2.clone())];
        out.extend(self.lines.iter().cloned().map(Component::Line));
        out
    }

    pub fn branch(&self) -> BranchDivisor {
        BranchDivisor::new(self.lines.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Same combinatorics, certified hypotheses, distinct splitting types.
    ZariskiPair,
    /// The splitting types agree, so this invariant does not separate the
    /// two curves. Nothing is claimed either way.
    Indistinguishable,
    /// Combinatorics differ or a hypothesis could not be certified.
    HypothesisFailed,
}

/// Hypotheses under which distinct splitting types rule out a
/// homeomorphism of pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub conics_transversal: bool,
    /// No branch line of the first arrangement passes through a node of
    /// `C1 + C2`.
    pub branch_a_avoids_nodes: bool,
    pub branch_b_avoids_nodes: bool,
}

impl Hypotheses {
    pub fn hold(&self) -> bool {
        self.conics_transversal && self.branch_a_avoids_nodes && self.branch_b_avoids_nodes
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZariskiCertificate {
    pub pair_id: String,
    pub arrangement_a: String,
    pub arrangement_b: String,
    pub signature_a: CombSignature,
    pub signature_b: CombSignature,
    pub comb_equal: bool,
    pub hypotheses: Hypotheses,
    pub splitting_a: Option<SplittingType>,
    pub splitting_b: Option<SplittingType>,
    /// Induced gluing data on the nodes of `C1 + C2`.
    pub gluing_a: Option<String>,
    pub gluing_b: Option<String>,
    pub verdict: Verdict,
    pub tolerances: Tolerances,
    pub precision_used: usize,
}

impl ZariskiCertificate {
    pub fn to_text(&self) -> String {
        let st = |s: &Option<SplittingType>| s.map_or("-".to_string(), |s| s.to_string());
        let gl = |g: &Option<String>| g.clone().unwrap_or_else(|| "-".into());
        let mut out = String::new();
        let _ = writeln!(out, "certificate {}", self.pair_id);
        let _ = writeln!(out, "  {}: {}", self.arrangement_a, self.signature_a.summary());
        let _ = writeln!(out, "  {}: {}", self.arrangement_b, self.signature_b.summary());
        let _ = writeln!(out, "  combinatorics equal: {}", self.comb_equal);
        let _ = writeln!(
            out,
            "  hypotheses: transversal {}, branch avoids nodes {} / {}",
            self.hypotheses.conics_transversal, self.hypotheses.branch_a_avoids_nodes, self.hypotheses.branch_b_avoids_nodes
        );
        let _ = writeln!(
            out,
            "  splitting: {} {} ({}) vs {} {} ({})",
            self.arrangement_a,
            st(&self.splitting_a),
            gl(&self.gluing_a),
            self.arrangement_b,
            st(&self.splitting_b),
            gl(&self.gluing_b)
        );
        let _ = writeln!(
            out,
            "  tolerances: zero {:e}, closure {:e}, search {:e}, rank {:e}; precision {} bits",
            self.tolerances.zero, self.tolerances.closure, self.tolerances.search, self.tolerances.rank, self.precision_used
        );
        let _ = writeln!(out, "  verdict: {:?}", self.verdict);
        out
    }
}

fn avoids_nodes(lines: &[ProjLine], nodes: &[crate::geometry::ProjPoint], tol: &Tolerances) -> bool {
    lines.iter().all(|l| nodes.iter().all(|q| l.incidence(q) > tol.point()))
}

/// Compare two arrangements sharing the conics `C1`, `C2`.
pub fn zariski_certificate(
    a: &ConicLineArrangement,
    b: &ConicLineArrangement,
    cfg: &Config,
) -> Result<ZariskiCertificate> {
    let tol = &cfg.tol;
    if !a.c1.proportional(&b.c1, tol.zero) || !a.c2.proportional(&b.c2, tol.zero) {
        return Err(Error::InvalidInput("the arrangements do not share their conics".into()));
    }
    let signature_a = comb_signature(&a.components(), tol)?;
    let signature_b = comb_signature(&b.components(), tol)?;
    let comb_equal = signature_a == signature_b;
    let nodes = intersect_conics(&a.c1, &a.c2, tol)?;
    let transversal = is_transversal(&nodes);
    let node_pts: Vec<_> = nodes.into_iter().map(|n| n.0).collect();
    let hypotheses = Hypotheses {
        conics_transversal: transversal,
        branch_a_avoids_nodes: avoids_nodes(&a.lines, &node_pts, tol),
        branch_b_avoids_nodes: avoids_nodes(&b.lines, &node_pts, tol),
    };
    let mut cert = ZariskiCertificate {
        pair_id: format!("{} vs {}", a.id, b.id),
        arrangement_a: a.id.clone(),
        arrangement_b: b.id.clone(),
        signature_a,
        signature_b,
        comb_equal,
        hypotheses,
        splitting_a: None,
        splitting_b: None,
        gluing_a: None,
        gluing_b: None,
        verdict: Verdict::HypothesisFailed,
        tolerances: *tol,
        precision_used: cfg.precision,
    };
    if !cert.hypotheses.hold() {
        return Ok(cert);
    }
    let opts = InducedOptions::default();
    let ra = splitting_report(&a.c1, &a.c2, &a.branch(), cfg, &opts)?;
    let rb = splitting_report(&b.c1, &b.c2, &b.branch(), cfg, &opts)?;
    cert.precision_used = ra.precision.max(rb.precision);
    cert.splitting_a = Some(ra.splitting);
    cert.splitting_b = Some(rb.splitting);
    cert.gluing_a = Some(ra.gluing.to_text());
    cert.gluing_b = Some(rb.gluing.to_text());
    cert.verdict = if ra.splitting == rb.splitting {
        Verdict::Indistinguishable
    } else if cert.comb_equal {
        Verdict::ZariskiPair
    } else {
        Verdict::HypothesisFailed
    };
    Ok(cert)
}
