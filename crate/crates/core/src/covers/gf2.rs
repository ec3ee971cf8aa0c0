//! Dense linear algebra over GF(2).

use std::fmt;

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vec(Vec<bool>);

impl Gf2Vec {
    pub fn zeros(len: usize) -> Self {
        Gf2Vec(vec![false; len])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Gf2Vec(bits)
    }

    /// The vector whose bits are those of `x`, lowest bit first.
    pub fn from_index(x: u64, len: usize) -> Self {
        Gf2Vec((0..len).map(|i| (x >> i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.0[i] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| !b)
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    pub fn xor_assign(&mut self, other: &Gf2Vec) {
        assert_eq!(self.len(), other.len(), "GF(2) vectors of different length");
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &Gf2Vec) -> Gf2Vec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }
}

impl fmt::Debug for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Reduced row echelon basis of the span of some vectors.
///
/// Every row has a 1 at its pivot column and 0 at the other pivot columns.
#[derive(Clone, Debug)]
pub struct RowSpace {
    len: usize,
    rows: Vec<Gf2Vec>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(len: usize, generators: &[Gf2Vec]) -> Self {
        let mut rows: Vec<Gf2Vec> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for g in generators {
            let mut v = g.clone();
            for (r, &p) in rows.iter().zip(&pivots) {
                if v.get(p) {
                    v.xor_assign(r);
                }
            }
            let Some(p) = (0..len).find(|&i| v.get(i)) else {
                continue;
            };
            for r in rows.iter_mut() {
                if r.get(p) {
                    r.xor_assign(&v);
                }
            }
            rows.push(v);
            pivots.push(p);
        }
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| pivots[i]);
        RowSpace {
            len,
            rows: order.iter().map(|&i| rows[i].clone()).collect(),
            pivots: order.iter().map(|&i| pivots[i]).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Gf2Vec] {
        &self.rows
    }

    /// The member of `v + span` with zeros at every pivot column, which is
    /// also the lexicographically smallest member when index 0 is the most
    /// significant position.
    pub fn reduce(&self, v: &Gf2Vec) -> Gf2Vec {
        let mut out = v.clone();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if out.get(p) {
                out.xor_assign(r);
            }
        }
        out
    }

    pub fn contains(&self, v: &Gf2Vec) -> bool {
        self.reduce(v).is_zero()
    }

    /// All vectors vanishing on the pivot columns: one per coset.
    pub fn coset_representatives(&self) -> Vec<Gf2Vec> {
        let free: Vec<usize> = (0..self.len).filter(|i| !self.pivots.contains(i)).collect();
        assert!(free.len() < 64, "too many cosets to enumerate");
        (0..1u64 << free.len())
            .map(|x| {
                let mut v = Gf2Vec::zeros(self.len);
                for (k, &i) in free.iter().enumerate() {
                    v.set(i, (x >> k) & 1 == 1);
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(s: &str) -> Gf2Vec {
        Gf2Vec::from_bits(s.chars().map(|c| c == '1').collect())
    }

    #[test]
    fn rank_of_triangle_incidence() {
        let rs = RowSpace::new(3, &[v("110"), v("101"), v("011")]);
        assert_eq!(rs.rank(), 2);
        assert!(rs.contains(&v("011")));
        assert!(!rs.contains(&v("100")));
        assert_eq!(rs.coset_representatives().len(), 2);
    }

    #[test]
    fn reduce_picks_lexicographic_minimum() {
        let rs = RowSpace::new(4, &[v("1111")]);
        assert_eq!(rs.reduce(&v("1100")), v("0011"));
        assert_eq!(rs.reduce(&v("0011")), v("0011"));
    }

    proptest! {
        #[test]
        fn reduce_is_coset_minimum(gens in proptest::collection::vec(0u64..64, 0..5), x in 0u64..64) {
            let gens: Vec<Gf2Vec> = gens.into_iter().map(|g| Gf2Vec::from_index(g, 6)).collect();
            let rs = RowSpace::new(6, &gens);
            let target = Gf2Vec::from_index(x, 6);
            // brute-force span
            let mut span = vec![Gf2Vec::zeros(6)];
            for g in &gens {
                let more: Vec<Gf2Vec> = span.iter().map(|s| s.xor(g)).collect();
                span.extend(more);
            }
            let min = span.iter().map(|s| s.xor(&target)).min().unwrap();
            prop_assert_eq!(rs.reduce(&target), min);
            prop_assert_eq!(rs.contains(&target), span.contains(&target));
        }
    }
}
