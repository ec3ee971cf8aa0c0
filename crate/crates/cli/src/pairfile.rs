//! Conversion between Poncelet pairs and arrangement files.

use conic_zariski::numeric::Tolerances;
use conic_zariski::poncelet::PonceletPair;

use crate::error::CliError;
use crate::file::ArrangementFile;

pub fn pair_to_file(pair: &PonceletPair) -> ArrangementFile {
    let mut f = ArrangementFile::new(pair.precision());
    f.period = Some(pair.period);
    f.conics.push(("C1".into(), pair.c1.clone()));
    f.conics.push(("C2".into(), pair.c2.clone()));
    for (i, n) in pair.nodes.iter().enumerate() {
        f.points.push((format!("N{}", i + 1), n.clone()));
    }
    for (i, b) in pair.bitangents.iter().enumerate() {
        f.lines.push((format!("T{}", i + 1), b.line.clone()));
    }
    if let Some(p) = pair.pairing {
        f.pairing = Some(p.concat().iter().map(|i| format!("T{}", i + 1)).collect::<Vec<_>>().try_into().expect("four labels"));
    }
    f
}

/// Rebuild the pair from its conics. Stored bitangents, when they match the
/// recomputed ones, fix the labels `T1..T4`; a stored pairing is kept only
/// in that case. Mismatches are returned as warnings.
pub fn pair_from_file(f: &ArrangementFile, tol: &Tolerances) -> Result<(PonceletPair, Vec<String>), CliError> {
    let c1 = f.conic("C1").ok_or_else(|| CliError::Parse("no conic C1".into()))?;
    let c2 = f.conic("C2").ok_or_else(|| CliError::Parse("no conic C2".into()))?;
    let n = f.period.ok_or_else(|| CliError::Parse("no period".into()))?;
    let mut pair = PonceletPair::new(c1.clone(), c2.clone(), n, *tol)?;
    let mut warnings = Vec::new();
    let stored: Vec<_> = (1..=4).filter_map(|k| f.line(&format!("T{k}"))).collect();
    if stored.len() == 4 {
        let perm: Vec<Option<usize>> = stored
            .iter()
            .map(|l| pair.bitangents.iter().position(|b| b.line.distance(l) < 1e-8))
            .collect();
        let mut seen = perm.iter().flatten().cloned().collect::<Vec<_>>();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() == 4 {
            let p: Vec<usize> = perm.into_iter().flatten().collect();
            pair = pair.with_pairing([[p[0], p[1]], [p[2], p[3]]]);
            match &f.pairing {
                Some(labels) if labels.iter().map(String::as_str).eq(["T1", "T2", "T3", "T4"]) => {}
                Some(labels) => {
                    warnings.push(format!("stored pairing {labels:?} is not in T1 T2 T3 T4 order; recomputing"));
                    pair.pairing = None;
                }
                None => pair.pairing = None,
            }
        } else {
            warnings.push("stored bitangents do not match the conics; labels recomputed".into());
        }
    }
    Ok((pair, warnings))
}
