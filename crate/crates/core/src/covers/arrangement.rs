use std::cmp::Ordering;

use super::gf2::{Gf2Vec, RowSpace};
use crate::error::{Error, Result};
use crate::geometry::{intersect_conics, line_conic_intersection, Conic, HomPoly, ProjLine, ProjPoint};
use crate::numeric::Tolerances;

/// An irreducible component of a conic-line arrangement.
#[derive(Clone, Debug)]
pub enum Component {
    Line(ProjLine),
    Conic(Conic),
}

impl Component {
    pub fn degree(&self) -> u32 {
        match self {
            Component::Line(_) => 1,
            Component::Conic(_) => 2,
        }
    }

    pub fn form(&self) -> HomPoly {
        match self {
            Component::Line(l) => l.form(),
            Component::Conic(c) => c.form(),
        }
    }

    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        match self {
            Component::Line(l) => l.contains(p, tol),
            Component::Conic(c) => c.contains(p, tol),
        }
    }

    pub fn precision(&self) -> usize {
        match self {
            Component::Line(l) => l.precision(),
            Component::Conic(c) => c.precision(),
        }
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        match self {
            Component::Line(l) => Component::Line(l.with_precision(prec)),
            Component::Conic(c) => Component::Conic(c.with_precision(prec)),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Component::Line(_) => "line",
            Component::Conic(_) => "conic",
        }
    }
}

/// Intersection points of two components with local multiplicities.
pub fn intersect_components(a: &Component, b: &Component, tol: &Tolerances) -> Result<Vec<(ProjPoint, usize)>> {
    match (a, b) {
        (Component::Line(l), Component::Line(m)) => {
            if l.distance(m) < tol.point() {
                return Err(Error::NotNodal("two components are the same line".into()));
            }
            Ok(vec![(l.meet(m).normalized(), 1)])
        }
        (Component::Line(l), Component::Conic(c)) | (Component::Conic(c), Component::Line(l)) => {
            line_conic_intersection(l, c, tol).map_err(|e| match e {
                Error::UnexpectedDegeneracy(_) => Error::NotNodal("a line lies on a conic component".into()),
                e => e,
            })
        }
        (Component::Conic(c), Component::Conic(d)) => intersect_conics(c, d, tol).map_err(|e| match e {
            Error::IdenticalConics => Error::NotNodal("two components are the same conic".into()),
            e => e,
        }),
    }
}

/// A node: a transversal intersection of exactly two components.
#[derive(Clone, Debug)]
pub struct Node {
    pub point: ProjPoint,
    /// Component indices, smaller first.
    pub components: [usize; 2],
}

/// A conic-line arrangement all of whose singular points are simple nodes.
#[derive(Clone, Debug)]
pub struct NodalArrangement {
    components: Vec<Component>,
    nodes: Vec<Node>,
    incidence: Vec<Gf2Vec>,
    flips: RowSpace,
}

impl NodalArrangement {
    /// Compute and certify the nodes: every pairwise intersection must be
    /// transversal and no point may lie on three components.
    pub fn new(components: Vec<Component>, tol: &Tolerances) -> Result<Self> {
        let mut nodes = Vec::new();
        for i in 0..components.len() {
            for j in (i + 1)..components.len() {
                for (p, m) in intersect_components(&components[i], &components[j], tol)? {
                    if m != 1 {
                        return Err(Error::NotNodal(format!("components {i} and {j} are tangent")));
                    }
                    nodes.push(Node {
                        point: p,
                        components: [i, j],
                    });
                }
            }
        }
        let ptol = tol.point();
        for n in &nodes {
            if let Some(k) = (0..components.len())
                .filter(|k| !n.components.contains(k))
                .find(|&k| components[k].contains(&n.point, ptol))
            {
                return Err(Error::NotNodal(format!(
                    "the intersection of components {} and {} lies on component {k}",
                    n.components[0], n.components[1]
                )));
            }
        }
        Ok(Self::from_parts(components, nodes))
    }

    /// The arrangement of two transversal conics.
    pub fn two_conics(c1: &Conic, c2: &Conic, tol: &Tolerances) -> Result<Self> {
        Self::new(vec![Component::Conic(c1.clone()), Component::Conic(c2.clone())], tol)
    }

    /// Assemble from known nodes, sorting them into the canonical order.
    fn from_parts(components: Vec<Component>, mut nodes: Vec<Node>) -> Self {
        nodes.sort_by(|a, b| match a.point.lex_cmp(&b.point, 1e-9) {
            Ordering::Equal => a.components.cmp(&b.components),
            o => o,
        });
        Self::with_nodes(components, nodes)
    }

    fn with_nodes(components: Vec<Component>, nodes: Vec<Node>) -> Self {
        let incidence: Vec<Gf2Vec> = (0..components.len())
            .map(|c| Gf2Vec::from_bits(nodes.iter().map(|n| n.components.contains(&c)).collect()))
            .collect();
        let flips = RowSpace::new(nodes.len(), &incidence);
        NodalArrangement {
            components,
            nodes,
            incidence,
            flips,
        }
    }

    /// The same arrangement with nodes listed in the order `perm` (the new
    /// node `k` is the old node `perm[k]`).
    pub fn with_node_order(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.nodes.len()];
        if perm.len() != self.nodes.len() || perm.iter().any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::InvalidInput("not a permutation of the nodes".into()));
        }
        let nodes = perm.iter().map(|&i| self.nodes[i].clone()).collect();
        Ok(Self::with_nodes(self.components.clone(), nodes))
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Row `i` has a 1 at every node on component `i`.
    pub fn incidence_matrix(&self) -> &[Gf2Vec] {
        &self.incidence
    }

    /// Span of the incidence rows, in reduced echelon form.
    pub fn flip_space(&self) -> &RowSpace {
        &self.flips
    }

    /// Nodes lying on component `i`.
    pub fn nodes_on(&self, i: usize) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&k| self.nodes[k].components.contains(&i)).collect()
    }

    /// Whether two arrangements have the same node labeling and incidence.
    pub fn same_structure(&self, other: &NodalArrangement) -> bool {
        self.incidence == other.incidence
            && self
                .nodes
                .iter()
                .zip(&other.nodes)
                .all(|(a, b)| a.components == b.components && a.point.distance(&b.point) < 1e-9)
    }
}
