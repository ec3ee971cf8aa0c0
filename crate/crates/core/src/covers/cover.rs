use petgraph::unionfind::UnionFind;

use super::gluing::GluingData;

/// The two sheets over a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sheet {
    pub component: usize,
    pub plus: bool,
}

impl Sheet {
    fn index(&self) -> usize {
        2 * self.component + usize::from(!self.plus)
    }

    fn from_index(i: usize) -> Sheet {
        Sheet {
            component: i / 2,
            plus: i % 2 == 0,
        }
    }
}

/// The double cover obtained by gluing two copies of every component.
#[derive(Clone, Debug)]
pub struct AbstractCover {
    pub sheets: Vec<Sheet>,
    /// Two gluings per node, in node order.
    pub edges: Vec<[(Sheet, Sheet); 2]>,
    /// Connected components of the cover, each a sorted list of sheets.
    pub connectivity: Vec<Vec<Sheet>>,
}

impl AbstractCover {
    pub fn is_connected(&self) -> bool {
        self.connectivity.len() == 1
    }

    pub fn partition_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.connectivity.iter().map(|c| c.len()).collect();
        s.sort_unstable();
        s
    }
}

/// `+` glues `Ci+` to `Cj+` and `Ci-` to `Cj-`; `-` glues `Ci+` to `Cj-` and
/// `Ci-` to `Cj+`.
pub fn build_cover(k: &GluingData) -> AbstractCover {
    let a = k.arrangement();
    let n = a.components().len();
    let sheets: Vec<Sheet> = (0..2 * n).map(Sheet::from_index).collect();
    let mut uf = UnionFind::<usize>::new(2 * n);
    let mut edges = Vec::with_capacity(a.node_count());
    for (q, node) in a.nodes().iter().enumerate() {
        let [i, j] = node.components;
        let s = |c, plus| Sheet { component: c, plus };
        let e = if k.is_plus(q) {
            [(s(i, true), s(j, true)), (s(i, false), s(j, false))]
        } else {
            [(s(i, true), s(j, false)), (s(i, false), s(j, true))]
        };
        for (x, y) in &e {
            uf.union(x.index(), y.index());
        }
        edges.push(e);
    }
    let labels = uf.into_labeling();
    let mut groups: Vec<Vec<Sheet>> = Vec::new();
    let mut root_of: Vec<(usize, usize)> = Vec::new();
    for (i, &r) in labels.iter().enumerate() {
        match root_of.iter().find(|(root, _)| *root == r) {
            Some(&(_, g)) => groups[g].push(sheets[i]),
            None => {
                root_of.push((r, groups.len()));
                groups.push(vec![sheets[i]]);
            }
        }
    }
    AbstractCover {
        sheets,
        edges,
        connectivity: groups,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::gluing::tests::two_conics;
    use crate::covers::{enumerate_pic2, equivalent, flip, GluingData};

    #[test]
    fn trivial_data_give_two_copies() {
        let c = build_cover(&GluingData::trivial(two_conics()));
        assert_eq!(c.partition_sizes(), vec![2, 2]);
        assert_eq!(c.edges.len(), 4);
    }

    #[test]
    fn two_two_data_give_a_connected_cover() {
        let c = build_cover(&GluingData::parse(two_conics(), "++--").unwrap());
        assert!(c.is_connected());
        assert_eq!(c.sheets.len(), 4);
    }

    #[test]
    fn equivalent_data_have_the_same_partition() {
        let a = two_conics();
        for cls in enumerate_pic2(&a) {
            let k = cls.canonical;
            let f = flip(&k, 1);
            assert!(equivalent(&k, &f).unwrap());
            assert_eq!(build_cover(&k).partition_sizes(), build_cover(&f).partition_sizes());
        }
    }
}
