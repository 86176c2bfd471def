use std::collections::BTreeMap;

use super::{Cube, Explored, Label, Nba};

/// Budget for the explicit direct-simulation pass, in
/// `states² · letters` units.
const SIMULATION_BUDGET: u64 = 1 << 22;

/// Language-preserving state reduction: removes states that are
/// unreachable or cannot reach an accepting cycle and merges bisimilar
/// states. Small automata are further reduced with direct simulation:
/// simulation-equivalent states are merged and a transition is dropped when
/// the same letter also leads to a state simulating its target.
pub fn reduce(a: &Nba) -> Nba {
    let mut r = quotient(&trim(a));
    let n = r.num_states() as u64;
    if n <= 64 && r.aps().len() <= 12 && n * n << r.aps().len() <= SIMULATION_BUDGET {
        r = quotient(&trim(&simulation_reduce(&r)));
    }
    bfs_order(&r)
}

/// `sim[p]` is the set of states directly simulating `p`.
fn direct_simulation(succ: &[Vec<u64>], accepting: u64) -> Vec<u64> {
    let n = succ.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut sim: Vec<u64> =
        (0..n).map(|p| if accepting >> p & 1 == 1 { accepting & all } else { all }).collect();
    loop {
        let mut changed = false;
        for p in 0..n {
            for q in 0..n {
                if sim[p] >> q & 1 == 0 || p == q {
                    continue;
                }
                let ok = succ[p].iter().zip(succ[q].iter()).all(|(&sp, &sq)| {
                    (0..n).filter(|p2| sp >> p2 & 1 == 1).all(|p2| sq & sim[p2] != 0)
                });
                if !ok {
                    sim[p] &= !(1 << q);
                    changed = true;
                }
            }
        }
        if !changed {
            return sim;
        }
    }
}

fn simulation_reduce(a: &Nba) -> Nba {
    let n = a.num_states();
    let letters = 1u64 << a.aps().len();
    let mask = a.letter_mask();
    let succ: Vec<Vec<u64>> = (0..n)
        .map(|q| (0..letters).map(|l| a.successors(q, l).fold(0u64, |acc, d| acc | 1 << d)).collect())
        .collect();
    let accepting = a.accepting().iter().fold(0u64, |acc, q| acc | 1 << q);
    let sim = direct_simulation(&succ, accepting);
    // representative of each simulation-equivalence class: its smallest member
    let rep: Vec<usize> =
        (0..n).map(|p| (0..n).find(|&q| sim[p] >> q & 1 == 1 && sim[q] >> p & 1 == 1).unwrap_or(p)).collect();
    let strictly_below = |p: usize, q: usize| sim[p] >> q & 1 == 1 && sim[q] >> p & 1 == 0;

    let mut letters_of: BTreeMap<(usize, usize), Vec<Cube>> = BTreeMap::new();
    for p in 0..n {
        if rep[p] != p {
            continue;
        }
        for l in 0..letters {
            let targets: Vec<usize> = {
                let mut t: Vec<usize> = (0..n).filter(|d| succ[p][l as usize] >> d & 1 == 1).map(|d| rep[d]).collect();
                t.sort_unstable();
                t.dedup();
                t
            };
            for &d in &targets {
                if targets.iter().any(|&e| e != d && strictly_below(d, e)) {
                    continue;
                }
                letters_of.entry((p, d)).or_default().push(Cube::minterm(l, mask));
            }
        }
    }
    let mut out = Nba::new(a.aps().to_vec(), a.outputs().clone()).expect("same alphabet");
    for _ in 0..n {
        out.add_state();
    }
    for q in 0..n {
        if a.initial().contains(&q) {
            out.set_initial(rep[q]);
        }
        out.set_accepting(q, a.is_accepting(q));
    }
    for ((p, d), cubes) in letters_of {
        out.add_edge(p, Label::from_cubes(cubes), d);
    }
    out
}

/// Renumbers states in breadth-first order from the initial states.
fn bfs_order(a: &Nba) -> Nba {
    let g = Explored::build(
        a.initial().iter().copied(),
        |&q| a.edges(q).map(|(d, _)| (d, ())).collect(),
        usize::MAX,
    )
    .expect("no limit");
    let new_id: BTreeMap<usize, usize> = g.nodes.iter().enumerate().map(|(i, q)| (*q, i)).collect();
    let mut out = Nba::new(a.aps().to_vec(), a.outputs().clone()).expect("same alphabet");
    for &q in &g.nodes {
        let id = out.add_state();
        if a.initial().contains(&q) {
            out.set_initial(id);
        }
        out.set_accepting(id, a.is_accepting(q));
    }
    for &q in &g.nodes {
        for (d, l) in a.edges(q) {
            out.add_edge(new_id[&q], l.clone(), new_id[&d]);
        }
    }
    out
}

fn trim(a: &Nba) -> Nba {
    let g = Explored::build(
        a.initial().iter().copied(),
        |&q| a.edges(q).map(|(d, _)| (d, ())).collect(),
        usize::MAX,
    )
    .expect("no limit");
    let live = g.live_nodes(|v| a.is_accepting(g.nodes[v]));
    let keep: Vec<usize> = {
        let mut k: Vec<usize> = (0..g.nodes.len()).filter(|v| live[*v]).map(|v| g.nodes[v]).collect();
        k.sort_unstable();
        k
    };
    let mut out = Nba::new(a.aps().to_vec(), a.outputs().clone()).expect("same alphabet");
    if keep.is_empty() {
        let q = out.add_state();
        out.set_initial(q);
        return out;
    }
    let new_id: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, q)| (*q, i)).collect();
    for _ in &keep {
        out.add_state();
    }
    for (&q, &id) in &new_id {
        if a.initial().contains(&q) {
            out.set_initial(id);
        }
        out.set_accepting(id, a.is_accepting(q));
        for (d, l) in a.edges(q) {
            if let Some(&nd) = new_id.get(&d) {
                out.add_edge(id, l.clone(), nd);
            }
        }
    }
    out
}

fn quotient(a: &Nba) -> Nba {
    let n = a.num_states();
    let mut block: Vec<usize> = (0..n).map(|q| usize::from(a.is_accepting(q))).collect();
    let mut count = renumber(&mut block);
    loop {
        let signatures: Vec<(usize, Vec<(usize, Label)>)> = (0..n)
            .map(|q| {
                let mut moves: BTreeMap<usize, Label> = BTreeMap::new();
                for (d, l) in a.edges(q) {
                    let slot = moves.entry(block[d]).or_insert_with(Label::ff);
                    *slot = slot.or(l);
                }
                (block[q], moves.into_iter().collect())
            })
            .collect();
        let mut ids: BTreeMap<&(usize, Vec<(usize, Label)>), usize> = BTreeMap::new();
        let mut next: Vec<usize> = Vec::with_capacity(n);
        for s in &signatures {
            let len = ids.len();
            next.push(*ids.entry(s).or_insert(len));
        }
        let next_count = ids.len();
        block = next;
        if next_count == count {
            break;
        }
        count = next_count;
    }
    renumber(&mut block);
    let blocks = block.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = Nba::new(a.aps().to_vec(), a.outputs().clone()).expect("same alphabet");
    for _ in 0..blocks {
        out.add_state();
    }
    for q in 0..n {
        if a.initial().contains(&q) {
            out.set_initial(block[q]);
        }
        out.set_accepting(block[q], a.is_accepting(q));
        for (d, l) in a.edges(q) {
            out.add_edge(block[q], l.clone(), block[d]);
        }
    }
    out
}

fn renumber(block: &mut [usize]) -> usize {
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    for b in block.iter_mut() {
        let len = ids.len();
        *b = *ids.entry(*b).or_insert(len);
    }
    ids.len()
}
