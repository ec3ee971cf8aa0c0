use super::certificate::{zariski_certificate, ConicLineArrangement, ZariskiCertificate};
use super::comb::{lemma_audit, LemmaAudit};
use crate::covers::BranchDivisor;
use crate::error::{Error, Result};
use crate::geometry::ProjLine;
use crate::numeric::Config;
use crate::poncelet::{degenerate_pairing, origin_at, trace, BitangentPairing, Degeneracy, PonceletPair, Transverse};

/// Chart parameters tried, in order, for a generic origin on `C1`.
const ORIGINS: [f64; 6] = [0.37, -1.3, 2.6, 0.83, -0.21, 1.7];

/// The data of the construction for a pair of period `2m`: a non-degenerate
/// transverse `L_1, ..., L_2m`, the bitangents relabeled so that `{T1, T2}`
/// and `{T3, T4}` are the pairs sharing a degenerate transverse, and the six
/// arrangements `C_ij = C1 + C2 + L_1 + ... + L_2m + T_i + T_j`.
#[derive(Clone, Debug)]
pub struct MainTheorem {
    pub pair: PonceletPair,
    /// Pairing in the original bitangent order of the input pair.
    pub pairing: BitangentPairing,
    pub transverse: Transverse,
    pub arrangements: Vec<ConicLineArrangement>,
}

/// Index pairs `{i, j}` of the six arrangements, zero-based.
pub const BITANGENT_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl MainTheorem {
    pub fn build(pair: &PonceletPair, cfg: &Config) -> Result<Self> {
        if pair.period % 2 != 0 || pair.period < 4 {
            return Err(Error::InvalidInput(format!(
                "the construction needs an even period of at least 4, got {}",
                pair.period
            )));
        }
        let pairing = degenerate_pairing(pair)?;
        let relabeled = pair.clone().with_pairing(pairing.0);
        let mut last = None;
        for t in ORIGINS {
            let origin = origin_at(&relabeled, t)?;
            let tr = match trace(&relabeled, &origin, 2 * pair.period + 2) {
                Ok(tr) => tr,
                Err(e) => {
                    last = Some(e);
                    continue;
                }
            };
            if tr.degeneracy != Degeneracy::NonDegenerate || tr.period != Some(pair.period) {
                last = Some(Error::UnexpectedDegeneracy(format!(
                    "transverse from t = {t} is {:?} with period {:?}",
                    tr.degeneracy, tr.period
                )));
                continue;
            }
            let mut out = MainTheorem {
                pair: relabeled.clone(),
                pairing,
                transverse: tr,
                arrangements: Vec::new(),
            };
            if !out.lemma_audit(cfg).holds() {
                last = Some(Error::HypothesisViolation(format!("incidence audit fails for origin t = {t}")));
                continue;
            }
            out.arrangements = BITANGENT_PAIRS
                .iter()
                .map(|&(i, j)| ConicLineArrangement {
                    id: format!("C{}{}", i + 1, j + 1),
                    c1: out.pair.c1.clone(),
                    c2: out.pair.c2.clone(),
                    lines: out.branch_lines(i, j),
                })
                .collect();
            return Ok(out);
        }
        Err(last.unwrap_or_else(|| Error::ValidationFailed("no origin tried".into())))
    }

    pub fn m(&self) -> usize {
        self.pair.period / 2
    }

    pub fn transverse_lines(&self) -> Vec<ProjLine> {
        self.transverse.lines()
    }

    pub fn bitangent_lines(&self) -> Vec<ProjLine> {
        self.pair.bitangents.iter().map(|b| b.line.clone()).collect()
    }

    fn branch_lines(&self, i: usize, j: usize) -> Vec<ProjLine> {
        let mut lines = self.transverse_lines();
        lines.push(self.pair.bitangents[i].line.clone());
        lines.push(self.pair.bitangents[j].line.clone());
        lines
    }

    /// The branch curve `L_1 + ... + L_2m`.
    pub fn transverse_branch(&self) -> BranchDivisor {
        BranchDivisor::new(self.transverse_lines())
    }

    /// The branch curve `T_i + T_j` (zero-based labels).
    pub fn bitangent_branch(&self, i: usize, j: usize) -> BranchDivisor {
        BranchDivisor::new(vec![self.pair.bitangents[i].line.clone(), self.pair.bitangents[j].line.clone()])
    }

    /// Whether `{i, j}` is `{T1, T2}` or `{T3, T4}` (zero-based labels).
    pub fn is_paired(i: usize, j: usize) -> bool {
        let (a, b) = (i.min(j), i.max(j));
        (a, b) == (0, 1) || (a, b) == (2, 3)
    }

    /// The arrangement `C_ij`.
    pub fn arrangement(&self, i: usize, j: usize) -> &ConicLineArrangement {
        let (a, b) = (i.min(j), i.max(j));
        let k = BITANGENT_PAIRS.iter().position(|&p| p == (a, b)).expect("distinct labels below 4");
        &self.arrangements[k]
    }

    pub fn lemma_audit(&self, cfg: &Config) -> LemmaAudit {
        lemma_audit(
            &self.pair.c1,
            &self.pair.c2,
            &self.transverse_lines(),
            &self.bitangent_lines(),
            &cfg.tol,
        )
    }

    /// Certificates for every paired choice against every cross choice.
    pub fn certificates(&self, cfg: &Config) -> Result<Vec<ZariskiCertificate>> {
        let mut out = Vec::new();
        for &(i, j) in BITANGENT_PAIRS.iter().filter(|p| Self::is_paired(p.0, p.1)) {
            for &(k, l) in BITANGENT_PAIRS.iter().filter(|p| !Self::is_paired(p.0, p.1)) {
                out.push(zariski_certificate(self.arrangement(i, j), self.arrangement(k, l), cfg)?);
            }
        }
        Ok(out)
    }
}
