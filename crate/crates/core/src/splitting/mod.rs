//! Splitting types of conic pairs in double planes, combinatorial
//! signatures and Zariski-pair certificates.

mod certificate;
mod comb;
mod theorem;

pub use certificate::{zariski_certificate, ConicLineArrangement, Hypotheses, Verdict, ZariskiCertificate};
pub use comb::{comb_signature, lemma_audit, CombSignature, LemmaAudit, PointClass};
pub use theorem::{MainTheorem, BITANGENT_PAIRS};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::covers::{induced_gluing_traced, BranchDivisor, GluingData, InducedOptions, NodalArrangement};
use crate::error::{Error, Result};
use crate::geometry::Conic;
use crate::numeric::Config;

/// The intersection numbers `(m1, m2)`, `m1 <= m2`, of one sheet over `C1`
/// with the two sheets over `C2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SplittingType {
    pub m1: usize,
    pub m2: usize,
}

impl SplittingType {
    pub fn new(a: usize, b: usize) -> Self {
        SplittingType {
            m1: a.min(b),
            m2: a.max(b),
        }
    }

    pub fn total(&self) -> usize {
        self.m1 + self.m2
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m1, self.m2)
    }
}

/// A splitting type with the gluing data it was read from.
#[derive(Debug, Clone)]
pub struct SplittingReport {
    pub splitting: SplittingType,
    pub gluing: GluingData,
    pub precision: usize,
}

/// Splitting type of `(C1, C2; B)`.
///
/// Over a `+` node the sheet `C1+` meets `C2+`, over a `-` node it meets
/// `C2-`, so the counts of the two signs are the two intersection numbers.
pub fn splitting_type(c1: &Conic, c2: &Conic, b: &BranchDivisor, cfg: &Config) -> Result<SplittingType> {
    splitting_report(c1, c2, b, cfg, &InducedOptions::default()).map(|r| r.splitting)
}

pub fn splitting_report(
    c1: &Conic,
    c2: &Conic,
    b: &BranchDivisor,
    cfg: &Config,
    opts: &InducedOptions,
) -> Result<SplittingReport> {
    let a = NodalArrangement::two_conics(c1, c2, &cfg.tol).map_err(|e| match e {
        Error::NotNodal(m) => Error::HypothesisViolation(format!("the conics are not transversal: {m}")),
        e => e,
    })?;
    let (gluing, precision) = induced_gluing_traced(b, &Arc::new(a), cfg, opts).map_err(|e| match e {
        Error::SupportHitsNode { node } => {
            Error::HypothesisViolation(format!("the branch curve passes through node {node} of C1 + C2"))
        }
        e => e,
    })?;
    Ok(SplittingReport {
        splitting: SplittingType::new(gluing.plus_count(), gluing.minus_count()),
        gluing,
        precision,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::Component;
    use crate::geometry::{bitangents, ProjLine, ProjPoint};

    fn conics() -> (Conic, Conic) {
        (
            Conic::from_f64([1.0, 0.0, 1.0, 0.0, 0.0, -1.0], 128),
            Conic::from_f64([0.25, 0.0, 4.0, 0.0, 0.0, -1.0], 128),
        )
    }

    #[test]
    fn splitting_type_is_ordered() {
        assert_eq!(SplittingType::new(3, 1), SplittingType { m1: 1, m2: 3 });
        assert_eq!(SplittingType::new(0, 4).to_string(), "(0, 4)");
    }

    #[test]
    fn bitangent_pairs_split_two_two() {
        let (c1, c2) = conics();
        let cfg = Config::default();
        let ts = bitangents(&c1, &c2, &cfg.tol).unwrap();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let b = BranchDivisor::new(vec![ts[i].line.clone(), ts[j].line.clone()]);
                let st = splitting_type(&c1, &c2, &b, &cfg).unwrap();
                assert_eq!(st, SplittingType::new(2, 2));
                let flipped = splitting_report(&c1, &c2, &b, &cfg, &InducedOptions { base_offset: 0, negate: vec![1] })
                    .unwrap();
                assert_eq!(flipped.splitting, st);
            }
        }
    }

    #[test]
    fn branch_through_a_node_violates_the_hypothesis() {
        let (c1, c2) = conics();
        let cfg = Config::default();
        let a = NodalArrangement::two_conics(&c1, &c2, &cfg.tol).unwrap();
        let l = a.nodes()[0].point.join(&ProjPoint::from_f64([0.1, 0.2, 1.0], 128));
        let b = BranchDivisor::new(vec![l.clone(), l]);
        assert!(matches!(splitting_type(&c1, &c2, &b, &cfg), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn signature_of_two_conics_and_of_one_bitangent() {
        let (c1, c2) = conics();
        let tol = crate::numeric::Tolerances::default();
        let base = vec![Component::Conic(c1.clone()), Component::Conic(c2.clone())];
        let s = comb_signature(&base, &tol).unwrap();
        assert_eq!(s.degrees, vec![2, 2]);
        assert_eq!(s.points, vec![PointClass { degrees: vec![2, 2], contacts: vec![(2, 2, 1)], count: 4 }]);
        let t = bitangents(&c1, &c2, &tol).unwrap().remove(0).line;
        let mut with_t = base.clone();
        with_t.push(Component::Line(t));
        let s = comb_signature(&with_t, &tol).unwrap();
        assert_eq!(s.degrees, vec![1, 2, 2]);
        assert_eq!(s.point_count(), 6);
        assert!(s.points.contains(&PointClass { degrees: vec![1, 2], contacts: vec![(1, 2, 2)], count: 2 }));
    }

    #[test]
    fn repeated_component_is_rejected() {
        let l = Component::Line(ProjLine::from_f64([1.0, 2.0, 3.0], 128));
        let r = comb_signature(&[l.clone(), l], &crate::numeric::Tolerances::default());
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }
}
