//! Dependency graphs over propositions.

use std::collections::{BTreeMap, BTreeSet};

use crate::ltl::LtlFormula;

/// Undirected co-occurrence graph: two nodes are adjacent iff some tracked
/// conjunct mentions both. Every edge remembers which conjuncts induced it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DependencyGraph {
    nodes: BTreeSet<String>,
    edges: BTreeMap<(String, String), BTreeSet<usize>>,
}

impl DependencyGraph {
    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    /// Edges as ordered pairs `(a, b)` with `a < b`, each with the indices
    /// of the conjuncts that induced it.
    pub fn edges(&self) -> &BTreeMap<(String, String), BTreeSet<usize>> {
        &self.edges
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.provenance(a, b).is_some()
    }

    pub fn provenance(&self, a: &str, b: &str) -> Option<&BTreeSet<usize>> {
        let key = if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        self.edges.get(&key)
    }

    pub fn neighbors<'a>(&'a self, a: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges.keys().filter_map(move |(x, y)| {
            if x == a {
                Some(y.as_str())
            } else if y == a {
                Some(x.as_str())
            } else {
                None
            }
        })
    }
}

/// Builds the dependency graph of `conjuncts` restricted to `nodes`.
pub fn build_dependency_graph(conjuncts: &[LtlFormula], nodes: &BTreeSet<String>) -> DependencyGraph {
    let mut g = DependencyGraph { nodes: nodes.clone(), edges: BTreeMap::new() };
    for (k, c) in conjuncts.iter().enumerate() {
        let props: Vec<String> = c.props().intersection(nodes).cloned().collect();
        for i in 0..props.len() {
            for j in i + 1..props.len() {
                g.edges.entry((props[i].clone(), props[j].clone())).or_default().insert(k);
            }
        }
    }
    g
}

/// Connected components, each sorted, listed by their smallest member.
pub fn connected_components(g: &DependencyGraph) -> Vec<BTreeSet<String>> {
    let names: Vec<&String> = g.nodes.iter().collect();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(k, n)| (n.as_str(), k)).collect();
    let mut uf = UnionFind::new(names.len());
    for (a, b) in g.edges.keys() {
        uf.union(index[a.as_str()], index[b.as_str()]);
    }
    // nodes are visited in sorted order, so components come out ordered by
    // their smallest member
    let mut slot: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out: Vec<BTreeSet<String>> = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let root = uf.find(k);
        let at = *slot.entry(root).or_insert_with(|| {
            out.push(BTreeSet::new());
            out.len() - 1
        });
        out[at].insert((*name).clone());
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}
