//! Accepting-lasso search over implicitly given finite graphs.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

/// A path `prefix · cycle^ω` through a graph. Each step is a node together
/// with the data of the edge leaving it; the cycle starts at the node the
/// prefix leads to and its last edge returns to that node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso<N, E> {
    pub prefix: Vec<(N, E)>,
    pub cycle: Vec<(N, E)>,
}

/// Explicit graph explored from a set of initial nodes.
pub(crate) struct Explored<N, E> {
    pub nodes: Vec<N>,
    pub succ: Vec<Vec<(usize, E)>>,
    parent: Vec<Option<(usize, usize)>>,
}

impl<N: Clone + Eq + Hash, E: Clone> Explored<N, E> {
    /// Breadth-first exploration. Returns `None` if more than `limit` nodes
    /// are reachable.
    pub fn build(initial: impl IntoIterator<Item = N>, mut succ: impl FnMut(&N) -> Vec<(N, E)>, limit: usize) -> Option<Self> {
        let mut index: HashMap<N, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut parent = Vec::new();
        for n in initial {
            if !index.contains_key(&n) {
                index.insert(n.clone(), nodes.len());
                nodes.push(n);
                parent.push(None);
            }
        }
        let mut adj: Vec<Vec<(usize, E)>> = Vec::new();
        let mut k = 0;
        while k < nodes.len() {
            let here = nodes[k].clone();
            let mut out = Vec::new();
            for (m, e) in succ(&here) {
                let id = match index.get(&m) {
                    Some(&id) => id,
                    None => {
                        if nodes.len() >= limit {
                            return None;
                        }
                        let id = nodes.len();
                        index.insert(m.clone(), id);
                        nodes.push(m);
                        parent.push(Some((k, out.len())));
                        id
                    }
                };
                out.push((id, e));
            }
            adj.push(out);
            k += 1;
        }
        Some(Explored { nodes, succ: adj, parent })
    }

    /// Strongly connected components (Tarjan, iterative), as a component id
    /// per node.
    pub fn components(&self) -> Vec<usize> {
        let n = self.nodes.len();
        let mut comp = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut num = vec![usize::MAX; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut counter = 0;
        let mut comp_count = 0;
        for root in 0..n {
            if num[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            num[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut i)) = call.last_mut() {
                if *i < self.succ[v].len() {
                    let w = self.succ[v][*i].0;
                    *i += 1;
                    if num[w] == usize::MAX {
                        num[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(num[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(u, _)) = call.last() {
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == num[v] {
                        while let Some(w) = stack.pop() {
                            on_stack[w] = false;
                            comp[w] = comp_count;
                            if w == v {
                                break;
                            }
                        }
                        comp_count += 1;
                    }
                }
            }
        }
        comp
    }

    /// Nodes lying on a cycle through an accepting node, or able to reach one.
    pub fn live_nodes(&self, accepting: impl Fn(usize) -> bool) -> Vec<bool> {
        let comp = self.components();
        let n = self.nodes.len();
        let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut good = vec![false; ncomp];
        for v in 0..n {
            if accepting(v) && self.succ[v].iter().any(|(w, _)| comp[*w] == comp[v]) {
                good[comp[v]] = true;
            }
        }
        // backward closure
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            for (w, _) in &self.succ[v] {
                pred[*w].push(v);
            }
        }
        let mut live: Vec<bool> = (0..n).map(|v| good[comp[v]]).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|v| live[*v]).collect();
        while let Some(v) = queue.pop_front() {
            for &u in &pred[v] {
                if !live[u] {
                    live[u] = true;
                    queue.push_back(u);
                }
            }
        }
        live
    }

    /// An accepting lasso, if one exists: a reachable cycle through a node
    /// for which `accepting` holds.
    pub fn accepting_lasso(&self, accepting: impl Fn(usize) -> bool) -> Option<Lasso<N, E>> {
        let comp = self.components();
        let target = (0..self.nodes.len())
            .find(|&v| accepting(v) && self.succ[v].iter().any(|(w, _)| comp[*w] == comp[v]))?;
        // prefix: follow parent pointers of the exploration tree
        let mut rev = Vec::new();
        let mut at = target;
        while let Some((p, edge)) = self.parent[at] {
            rev.push((self.nodes[p].clone(), self.succ[p][edge].1.clone()));
            at = p;
        }
        rev.reverse();
        // cycle: breadth-first search inside the component back to `target`
        let mut back: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut found = None;
        for (k, (w, _)) in self.succ[target].iter().enumerate() {
            if comp[*w] != comp[target] {
                continue;
            }
            if *w == target {
                found = Some((target, k));
                break;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = back.entry(*w) {
                e.insert((target, k));
                queue.push_back(*w);
            }
        }
        while found.is_none() {
            let v = queue.pop_front().expect("target lies on a cycle");
            for (k, (w, _)) in self.succ[v].iter().enumerate() {
                if *w == target {
                    found = Some((v, k));
                    break;
                }
                if comp[*w] == comp[target] && !back.contains_key(w) {
                    back.insert(*w, (v, k));
                    queue.push_back(*w);
                }
            }
        }
        let (mut v, mut k) = found.unwrap();
        let mut cycle_rev = Vec::new();
        loop {
            cycle_rev.push((self.nodes[v].clone(), self.succ[v][k].1.clone()));
            if v == target {
                break;
            }
            (v, k) = back[&v];
        }
        cycle_rev.reverse();
        Some(Lasso { prefix: rev, cycle: cycle_rev })
    }
}

/// Searches for an accepting lasso in the graph reachable from `initial`.
/// `None` as outer result means the node limit was hit.
pub(crate) fn find_accepting_lasso<N, E>(
    initial: impl IntoIterator<Item = N>,
    succ: impl FnMut(&N) -> Vec<(N, E)>,
    accepting: impl Fn(&N) -> bool,
    limit: usize,
) -> Option<Option<Lasso<N, E>>>
where
    N: Clone + Eq + Hash,
    E: Clone,
{
    let g = Explored::build(initial, succ, limit)?;
    Some(g.accepting_lasso(|v| accepting(&g.nodes[v])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &'static [(u32, u32)]) -> impl FnMut(&u32) -> Vec<(u32, char)> {
        move |n| edges.iter().filter(|(a, _)| a == n).map(|(_, b)| (*b, 'x')).collect()
    }

    #[test]
    fn finds_cycle_through_accepting_node() {
        let edges: &'static [(u32, u32)] = &[(0, 1), (1, 2), (2, 1), (2, 3)];
        let lasso = find_accepting_lasso([0], graph(edges), |n| *n == 2, 100).unwrap().unwrap();
        let prefix: Vec<u32> = lasso.prefix.iter().map(|(n, _)| *n).collect();
        let cycle: Vec<u32> = lasso.cycle.iter().map(|(n, _)| *n).collect();
        assert_eq!(prefix, [0, 1]);
        assert_eq!(cycle, [2, 1]);
    }

    #[test]
    fn acyclic_accepting_node_is_not_enough() {
        let edges: &'static [(u32, u32)] = &[(0, 1), (1, 2), (2, 2)];
        assert!(find_accepting_lasso([0], graph(edges), |n| *n == 1, 100).unwrap().is_none());
        let lasso = find_accepting_lasso([0], graph(edges), |n| *n == 2, 100).unwrap().unwrap();
        assert_eq!(lasso.cycle.len(), 1);
    }

    #[test]
    fn limit_is_reported() {
        let edges: &'static [(u32, u32)] = &[(0, 1), (1, 2), (2, 0)];
        assert!(find_accepting_lasso([0], graph(edges), |_| true, 2).is_none());
    }

    #[test]
    fn live_nodes_reach_accepting_cycles() {
        let edges: &'static [(u32, u32)] = &[(0, 1), (1, 1), (0, 2), (2, 3)];
        let g = Explored::build([0u32], graph(edges), 100).unwrap();
        let live = g.live_nodes(|v| g.nodes[v] == 1);
        let live_names: Vec<u32> = (0..g.nodes.len()).filter(|v| live[*v]).map(|v| g.nodes[v]).collect();
        assert_eq!(live_names, [0, 1]);
    }
}
