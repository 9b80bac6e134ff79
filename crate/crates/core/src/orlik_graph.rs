//! The directed graph `𝒢(M)` on a finite set of orders `M`.
//!
//! There is an edge `m_1 → m_2` labelled `p` when `m_1/m_2 = p^k` for a
//! prime `p` and `k ≥ 1`, and no third element of `M` sits between them in
//! the divisibility order. Components are always taken in the undirected
//! sense.

use crate::arith::{is_prime, prime_factors, valuation};
use crate::cyclo_algebra::Divisor;
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub from: u64,
    pub to: u64,
    pub prime: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrlikGraph {
    /// Descending.
    vertices: Vec<u64>,
    /// Sorted by `from` descending, then `to` descending.
    edges: Vec<Edge>,
    index: HashMap<u64, usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

impl OrlikGraph {
    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn p_edges(&self, p: u64) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.prime == p)
    }

    /// Primes dividing `lcm(M)`, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = self
            .vertices
            .iter()
            .flat_map(|&m| prime_factors(m))
            .collect();
        set.into_iter().collect()
    }

    /// `l(M, p) = max_m l(m, p)`.
    pub fn l(&self, p: u64) -> u32 {
        self.vertices.iter().map(|&m| valuation(m, p)).max().unwrap_or(0)
    }

    /// Undirected components of `(M, E')` where `E'` keeps the edges
    /// accepted by `keep`. Each component is descending; components are
    /// ordered by their largest element, descending.
    fn components_with(&self, keep: impl Fn(&Edge) -> bool) -> Vec<Vec<u64>> {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in self.edges.iter().filter(|e| keep(e)) {
            uf.union(self.index[&e.from], self.index[&e.to]);
        }
        let mut groups: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (i, &m) in self.vertices.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(m);
        }
        let mut out: Vec<Vec<u64>> = groups.into_values().collect();
        out.sort_by(|a, b| b[0].cmp(&a[0]));
        out
    }

    pub fn components(&self) -> Vec<Vec<u64>> {
        self.components_with(|_| true)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// The `p`-planes: components after deleting all `p`-edges.
    pub fn p_planes(&self, p: u64) -> Result<Vec<Vec<u64>>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(self.components_with(|e| e.prime != p))
    }

    /// `p`-planes at which no `p`-edge ends.
    pub fn highest_p_planes(&self, p: u64) -> Result<Vec<Vec<u64>>> {
        let targets: BTreeSet<u64> = self.p_edges(p).map(|e| e.to).collect();
        Ok(self
            .p_planes(p)?
            .into_iter()
            .filter(|plane| plane.iter().all(|m| !targets.contains(m)))
            .collect())
    }

    /// `(T_p)`: exactly one highest `p`-plane.
    pub fn condition_tp(&self, p: u64) -> Result<bool> {
        Ok(self.highest_p_planes(p)?.len() == 1)
    }

    /// `(S_2)`: deleting the highest 2-edges (those starting at a vertex
    /// where no 2-edge ends) leaves one or two components.
    pub fn condition_s2(&self) -> bool {
        let targets: BTreeSet<u64> = self.p_edges(2).map(|e| e.to).collect();
        let highest = |e: &Edge| e.prime == 2 && !targets.contains(&e.from);
        self.components_with(|e| !highest(e)).len() <= 2
    }

    fn odd_tp_all(&self) -> bool {
        self.primes()
            .into_iter()
            .filter(|&p| p >= 3)
            .all(|p| self.condition_tp(p).expect("prime"))
    }

    /// Condition (I): connected, `(S_2)`, and `(T_p)` for every prime
    /// `p ≥ 3` dividing `lcm(M)`.
    pub fn condition_i(&self) -> bool {
        self.is_connected() && self.condition_s2() && self.odd_tp_all()
    }

    /// Condition (II): exactly two components `M_1, M_2`, both 2-planes of
    /// `𝒢(M)` satisfying `(T_p)` for `p ≥ 3`, with
    /// `gcd(lcm(M_1), lcm(M_2)) ∈ {1, 2}` and `l(M_1,2) > l(M_2,2) ∈ {0, 1}`
    /// for one of the two orderings.
    pub fn condition_ii(&self) -> bool {
        let comps = self.components();
        if comps.len() != 2 {
            return false;
        }
        let planes = self.p_planes(2).expect("2 is prime");
        if !comps.iter().all(|c| planes.contains(c)) {
            return false;
        }
        let subs: Vec<OrlikGraph> = comps
            .iter()
            .map(|c| build_graph(c).expect("nonempty component"))
            .collect();
        if !subs.iter().all(OrlikGraph::odd_tp_all) {
            return false;
        }
        let (p1, p2) = (subs[0].primes(), subs[1].primes());
        let gcd_ok = p1.iter().filter(|p| p2.contains(p)).all(|&p| {
            p == 2 && subs[0].l(2).min(subs[1].l(2)) <= 1
        });
        let (l1, l2) = (subs[0].l(2), subs[1].l(2));
        let order_ok = (l1 > l2 && l2 <= 1) || (l2 > l1 && l1 <= 1);
        gcd_ok && order_ok
    }

    /// Vertices reachable from `start` along directed edges.
    fn reachable(&self, start: u64) -> BTreeSet<u64> {
        let mut adj: HashMap<u64, Vec<u64>> = HashMap::new();
        for e in &self.edges {
            adj.entry(e.from).or_default().push(e.to);
        }
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(m) = stack.pop() {
            for &next in adj.get(&m).into_iter().flatten() {
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        seen
    }

    /// The largest element, if every vertex is reachable from it.
    pub fn root(&self) -> Option<u64> {
        let top = self.vertices[0];
        (self.reachable(top).len() == self.vertices.len()).then_some(top)
    }

    /// Maximal directed paths of 2-edges. Every vertex has at most one
    /// outgoing and one incoming 2-edge, so these paths partition `M`.
    pub fn two_edge_paths(&self) -> Vec<Vec<u64>> {
        let next: HashMap<u64, u64> = self.p_edges(2).map(|e| (e.from, e.to)).collect();
        let has_incoming: BTreeSet<u64> = next.values().copied().collect();
        let mut paths = Vec::new();
        for &m in &self.vertices {
            if has_incoming.contains(&m) {
                continue;
            }
            let mut path = vec![m];
            let mut cur = m;
            while let Some(&n) = next.get(&cur) {
                path.push(n);
                cur = n;
            }
            paths.push(path);
        }
        paths
    }

    /// A maximal 2-edge path meeting every 2-plane, if one exists.
    pub fn connecting_two_chain(&self) -> Option<Vec<u64>> {
        let planes = self.p_planes(2).expect("2 is prime");
        let plane_of: HashMap<u64, usize> = planes
            .iter()
            .enumerate()
            .flat_map(|(i, pl)| pl.iter().map(move |&m| (m, i)))
            .collect();
        self.two_edge_paths().into_iter().find(|path| {
            let hit: BTreeSet<usize> = path.iter().map(|m| plane_of[m]).collect();
            hit.len() == planes.len()
        })
    }

    /// The largest element is a root, and a chain of 2-edges meets every
    /// 2-plane.
    pub fn strong_condition(&self) -> bool {
        self.root().is_some() && self.connecting_two_chain().is_some()
    }

    /// Graphviz description.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for m in &self.vertices {
            let _ = writeln!(out, "  \"{m}\";");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", e.from, e.to, e.prime);
        }
        out.push_str("}\n");
        out
    }

    pub fn report(&self) -> GraphReport {
        let tp = self
            .primes()
            .into_iter()
            .map(|p| (p, self.condition_tp(p).expect("prime")))
            .collect();
        GraphReport {
            m: self.vertices.clone(),
            connected: self.is_connected(),
            s2: self.condition_s2(),
            tp,
            condition_i: self.condition_i(),
            condition_ii: self.condition_ii(),
            strong: self.strong_condition(),
        }
    }
}

/// All graph predicates at once; `tp` covers the primes dividing `lcm(M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    #[serde(rename = "M")]
    pub m: Vec<u64>,
    pub connected: bool,
    #[serde(rename = "S2")]
    pub s2: bool,
    #[serde(rename = "Tp")]
    pub tp: BTreeMap<u64, bool>,
    pub condition_i: bool,
    pub condition_ii: bool,
    pub strong: bool,
}

/// Builds `𝒢(M)`. Duplicates in `m` are ignored.
pub fn build_graph(m: &[u64]) -> Result<OrlikGraph> {
    if m.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    if m.contains(&0) {
        return Err(Error::InvalidOrder(0));
    }
    let set: BTreeSet<u64> = m.iter().copied().collect();
    let vertices: Vec<u64> = set.iter().rev().copied().collect();
    let index = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for &m1 in &vertices {
        for p in prime_factors(m1) {
            // the edge goes to the nearest m1/p^i in M; farther ones are
            // blocked by it
            let mut cur = m1;
            while cur % p == 0 {
                cur /= p;
                if set.contains(&cur) {
                    edges.push(Edge {
                        from: m1,
                        to: cur,
                        prime: p,
                    });
                    break;
                }
            }
        }
    }
    edges.sort_by(|a, b| b.from.cmp(&a.from).then(b.to.cmp(&a.to)));
    Ok(OrlikGraph {
        vertices,
        edges,
        index,
    })
}

pub fn p_planes(g: &OrlikGraph, p: u64) -> Result<Vec<Vec<u64>>> {
    g.p_planes(p)
}

pub fn condition_tp(g: &OrlikGraph, p: u64) -> Result<bool> {
    g.condition_tp(p)
}

pub fn condition_s2(g: &OrlikGraph) -> bool {
    g.condition_s2()
}

pub fn condition_i(g: &OrlikGraph) -> bool {
    g.condition_i()
}

pub fn condition_ii(g: &OrlikGraph) -> bool {
    g.condition_ii()
}

pub fn strong_condition(g: &OrlikGraph) -> bool {
    g.strong_condition()
}

/// The Ψ-support `M` of `Λ_{k_1} - Λ_{k_2} + … ± Λ_{k_l}` for a chain with
/// `k_j | k_{j-1}`, ascending. The multiplicities are 0/1, and a nonempty
/// `M` satisfies the strong condition; either failing is reported as
/// [`Error::CrossCheck`].
pub fn alternating_lambda_set(k: &[u64]) -> Result<Vec<u64>> {
    if k.contains(&0) {
        return Err(Error::InvalidOrder(0));
    }
    for w in k.windows(2) {
        if w[0] % w[1] != 0 {
            return Err(Error::NotDivisibilityChain(format!(
                "{} does not divide {}",
                w[1], w[0]
            )));
        }
    }
    let div = Divisor::from_chi(k.iter().enumerate().map(|(j, &kj)| {
        let c = if j % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        (kj, c)
    }));
    if let Some((m, c)) = div
        .psi_coeffs()
        .iter()
        .find(|(_, c)| !(c.is_one() || c.is_zero()))
    {
        return Err(Error::CrossCheck(format!(
            "alternating sum has multiplicity {c} at order {m}"
        )));
    }
    let support = div.support();
    if !support.is_empty() && !build_graph(&support)?.strong_condition() {
        return Err(Error::CrossCheck(format!(
            "support {support:?} of the alternating sum fails the strong condition"
        )));
    }
    Ok(support)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(m: &[u64]) -> BTreeSet<(u64, u64, u64)> {
        build_graph(m)
            .unwrap()
            .edges()
            .iter()
            .map(|e| (e.from, e.to, e.prime))
            .collect()
    }

    #[test]
    fn edge_rule() {
        assert_eq!(edges(&[30, 20, 6, 4]), BTreeSet::from([(30, 6, 5), (20, 4, 5)]));
        assert!(edges(&[7]).is_empty());
        assert_eq!(edges(&[8, 2, 1]), BTreeSet::from([(8, 2, 2), (2, 1, 2)]));
        assert!(matches!(build_graph(&[]), Err(Error::EmptyVertexSet)));
    }

    #[test]
    fn planes() {
        let g = build_graph(&[30, 20, 6, 4]).unwrap();
        assert_eq!(g.p_planes(2).unwrap(), vec![vec![30, 6], vec![20, 4]]);
        let g = build_graph(&[4, 2, 1]).unwrap();
        assert_eq!(g.p_planes(2).unwrap().len(), 3);
        assert!(matches!(g.p_planes(4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn conditions() {
        assert!(build_graph(&[12, 6, 4, 2]).unwrap().condition_i());
        assert!(build_graph(&[6, 4]).unwrap().condition_ii());
        assert!(!build_graph(&[6, 4]).unwrap().condition_i());
        let g = build_graph(&[30, 20, 6, 4]).unwrap();
        assert!(!g.condition_i() && !g.condition_ii());
        let g = build_graph(&[13]).unwrap();
        assert!(g.condition_i() && g.condition_s2() && g.condition_tp(13).unwrap());
        assert!(build_graph(&[4, 1]).unwrap().strong_condition());
    }

    #[test]
    fn alternating_sets() {
        assert_eq!(alternating_lambda_set(&[4, 2]).unwrap(), vec![4]);
        assert!(alternating_lambda_set(&[6, 6]).unwrap().is_empty());
        assert_eq!(alternating_lambda_set(&[12, 6, 2]).unwrap(), vec![1, 2, 4, 12]);
        assert!(matches!(
            alternating_lambda_set(&[12, 5]),
            Err(Error::NotDivisibilityChain(_))
        ));
    }

    #[test]
    fn dot_output() {
        let dot = build_graph(&[2, 1]).unwrap().to_dot();
        assert!(dot.contains("\"2\" -> \"1\" [label=\"2\"];"));
    }
}
