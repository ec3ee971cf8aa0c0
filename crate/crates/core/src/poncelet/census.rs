use serde::{Deserialize, Serialize};

use super::{repeat_tol, trace, Degeneracy, PonceletPair, Transverse};
use crate::error::{Error, Result};

/// Partition of the four bitangents into the two pairs that share a
/// degenerate transverse, as indices into [`PonceletPair::bitangents`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitangentPairing(pub [[usize; 2]; 2]);

impl BitangentPairing {
    /// Whether `{a, b}` is one of the two pairs.
    pub fn is_paired(&self, a: usize, b: usize) -> bool {
        self.0.iter().any(|p| (p[0] == a && p[1] == b) || (p[0] == b && p[1] == a))
    }
}

fn bitangent_index(pair: &PonceletPair, t: &Transverse, pos: usize) -> Option<usize> {
    let l = &t.steps[pos].1;
    let rt = repeat_tol(&pair.tol);
    pair.bitangents.iter().position(|b| b.line.distance(l) < rt)
}

/// Trace the degenerate transverse from the `C1` tangency point of every
/// bitangent and group the bitangents that appear together.
pub fn degenerate_pairing(pair: &PonceletPair) -> Result<BitangentPairing> {
    if pair.period % 2 != 0 {
        return Err(Error::InvalidInput("pairing needs an even period".into()));
    }
    if pair.bitangents.len() != 4 {
        return Err(Error::InvalidInput("pair has no bitangents".into()));
    }
    let mut partner = [usize::MAX; 4];
    for k in 0..4 {
        let origin = &pair.bitangents[k].tangency[0];
        let t = trace(pair, origin, 2 * pair.period + 2)?;
        if t.degeneracy != Degeneracy::TwoBitangents {
            return Err(Error::UnexpectedDegeneracy(format!(
                "transverse from the tangency point of T{} is {:?}",
                k + 1,
                t.degeneracy
            )));
        }
        let idx: Vec<Option<usize>> = t.reflections.iter().map(|&j| bitangent_index(pair, &t, j)).collect();
        let found: Vec<usize> = idx.iter().flatten().cloned().collect();
        if found.len() != 2 || !found.contains(&k) || found[0] == found[1] {
            return Err(Error::UnexpectedDegeneracy(format!(
                "reflection lines from T{} do not match two bitangents",
                k + 1
            )));
        }
        partner[k] = if found[0] == k { found[1] } else { found[0] };
    }
    for k in 0..4 {
        if partner[partner[k]] != k {
            return Err(Error::UnexpectedDegeneracy("bitangent pairing is not symmetric".into()));
        }
    }
    let a = [0, partner[0]];
    let rest: Vec<usize> = (0..4).filter(|i| !a.contains(i)).collect();
    Ok(BitangentPairing([a, [rest[0], rest[1]]]))
}

/// Degenerate transverses found from the eight special origins.
#[derive(Clone, Debug)]
pub struct Census {
    pub transverses: Vec<Transverse>,
}

impl Census {
    pub fn count(&self, d: Degeneracy) -> usize {
        self.transverses.iter().filter(|t| t.degeneracy == d).count()
    }
}

/// Trace from the four bitangent tangency points on `C1` and the four nodes,
/// keeping one transverse per distinct line set.
pub fn census(pair: &PonceletPair) -> Result<Census> {
    let rt = repeat_tol(&pair.tol);
    let mut origins = Vec::new();
    for b in &pair.bitangents {
        origins.push(b.tangency[0].clone());
    }
    origins.extend(pair.nodes.iter().cloned());
    let mut out: Vec<Transverse> = Vec::new();
    for o in origins {
        let t = trace(pair, &o, 2 * pair.period + 2)?;
        let lines = t.distinct_lines(rt);
        let seen = out.iter().any(|u| {
            let other = u.distinct_lines(rt);
            other.len() == lines.len() && lines.iter().all(|l| other.iter().any(|m| m.distance(l) < rt))
        });
        if !seen {
            out.push(t);
        }
    }
    Ok(Census { transverses: out })
}
