use std::fmt;
use std::sync::Arc;

use super::arrangement::NodalArrangement;
use super::gf2::Gf2Vec;
use crate::error::{Error, Result};

/// A sign at every node of an arrangement; bit 0 is `+`, bit 1 is `-`.
#[derive(Clone)]
pub struct GluingData {
    arrangement: Arc<NodalArrangement>,
    signs: Gf2Vec,
}

impl GluingData {
    pub fn new(arrangement: Arc<NodalArrangement>, signs: Gf2Vec) -> Result<Self> {
        if signs.len() != arrangement.node_count() {
            return Err(Error::InvalidInput(format!(
                "{} signs for {} nodes",
                signs.len(),
                arrangement.node_count()
            )));
        }
        Ok(GluingData { arrangement, signs })
    }

    /// All signs `+`.
    pub fn trivial(arrangement: Arc<NodalArrangement>) -> Self {
        let n = arrangement.node_count();
        GluingData {
            arrangement,
            signs: Gf2Vec::zeros(n),
        }
    }

    /// Parse the textual form, e.g. `"++--"`.
    pub fn parse(arrangement: Arc<NodalArrangement>, text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '+' => Ok(false),
                '-' | '\u{2212}' => Ok(true),
                c => Err(Error::InvalidInput(format!("unexpected sign character {c:?}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        GluingData::new(arrangement, Gf2Vec::from_bits(bits))
    }

    pub fn arrangement(&self) -> &Arc<NodalArrangement> {
        &self.arrangement
    }

    pub fn signs(&self) -> &Gf2Vec {
        &self.signs
    }

    /// Whether node `k` has sign `+`.
    pub fn is_plus(&self, k: usize) -> bool {
        !self.signs.get(k)
    }

    pub fn plus_count(&self) -> usize {
        self.signs.len() - self.signs.count_ones()
    }

    pub fn minus_count(&self) -> usize {
        self.signs.count_ones()
    }

    pub fn to_text(&self) -> String {
        self.signs.bits().iter().map(|&b| if b { '-' } else { '+' }).collect()
    }

    fn check_same(&self, other: &GluingData) -> Result<()> {
        if Arc::ptr_eq(&self.arrangement, &other.arrangement) || self.arrangement.same_structure(&other.arrangement) {
            Ok(())
        } else {
            Err(Error::ArrangementMismatch)
        }
    }
}

impl fmt::Display for GluingData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for GluingData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GluingData({})", self.to_text())
    }
}

/// Reverse the sign at every node on component `i`.
pub fn flip(k: &GluingData, i: usize) -> GluingData {
    let row = &k.arrangement.incidence_matrix()[i];
    GluingData {
        arrangement: k.arrangement.clone(),
        signs: k.signs.xor(row),
    }
}

/// Whether the two data differ by a sequence of flips.
pub fn equivalent(k1: &GluingData, k2: &GluingData) -> Result<bool> {
    k1.check_same(k2)?;
    Ok(k1.arrangement.flip_space().contains(&k1.signs.xor(&k2.signs)))
}

/// Node-wise product of signs.
pub fn tensor(k1: &GluingData, k2: &GluingData) -> Result<GluingData> {
    k1.check_same(k2)?;
    Ok(GluingData {
        arrangement: k1.arrangement.clone(),
        signs: k1.signs.xor(&k2.signs),
    })
}

/// A flip-equivalence class, held by its lexicographically smallest member
/// (reading `+` before `-`, first node first).
#[derive(Clone, Debug)]
pub struct GluingClass {
    pub canonical: GluingData,
}

impl GluingClass {
    pub fn is_trivial(&self) -> bool {
        self.canonical.signs.is_zero()
    }
}

impl PartialEq for GluingClass {
    fn eq(&self, other: &Self) -> bool {
        self.canonical.signs == other.canonical.signs
            && self.canonical.check_same(&other.canonical).is_ok()
    }
}

pub fn canonical_form(k: &GluingData) -> GluingClass {
    GluingClass {
        canonical: GluingData {
            arrangement: k.arrangement.clone(),
            signs: k.arrangement.flip_space().reduce(&k.signs),
        },
    }
}

/// Every class of gluing data, trivial class first.
pub fn enumerate_pic2(a: &Arc<NodalArrangement>) -> Vec<GluingClass> {
    let mut reps = a.flip_space().coset_representatives();
    reps.sort();
    reps.into_iter()
        .map(|signs| GluingClass {
            canonical: GluingData {
                arrangement: a.clone(),
                signs,
            },
        })
        .collect()
}
