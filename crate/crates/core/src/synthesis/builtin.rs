//! Bounded search for small strategies and counterstrategies.
//!
//! For growing bounds `k`, the search enumerates `k`-state Mealy machines
//! for the system and `k`-state Moore machines for the environment in a
//! canonical order: transition entries are filled state by state, a fresh
//! state may only be the next unused one, and after every entry the product
//! of the partial machine with the Büchi automaton of the opponent's goal is
//! checked for an accepting cycle. A cycle in the partial product stays in
//! every completion, so the branch is cut.

use super::machine::MAX_MACHINE_PROPS;
use super::{verify, verify_counterstrategy, Counterstrategy, Strategy, SynthesisError, SynthesisResult};
use crate::automata::{ltl_to_nba, reduce, Nba};
use crate::ltl::{LtlFormula, SpecContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuiltinOptions {
    /// Largest machine size tried, for both players.
    pub max_states: usize,
    /// Specifications over more propositions are answered with `Unknown`.
    pub max_props: usize,
    /// Number of transition entries the search may try before giving up.
    pub node_budget: u64,
}

impl Default for BuiltinOptions {
    fn default() -> Self {
        BuiltinOptions { max_states: 4, max_props: 8, node_budget: 4_000_000 }
    }
}

impl BuiltinOptions {
    pub fn with_max_states(max_states: usize) -> Self {
        BuiltinOptions { max_states, ..Default::default() }
    }
}

/// Decides realizability of `ctx` by bounded search, alternating between a
/// strategy and a counterstrategy of `k` states for `k = 1, 2, …`.
///
/// The machines are built over the propositions the formula mentions and
/// then extended to the declared ones: unused outputs stay false and unused
/// inputs are ignored or emitted false.
pub fn synthesize_builtin(ctx: &SpecContext, options: &BuiltinOptions) -> Result<SynthesisResult, SynthesisError> {
    ctx.validate()?;
    let props = ctx.formula.props();
    if props.len() > options.max_props.min(MAX_MACHINE_PROPS) {
        return Ok(SynthesisResult::Unknown(format!(
            "{} propositions exceed the builtin bound of {}",
            props.len(),
            options.max_props
        )));
    }
    let inputs: Vec<String> = ctx.inputs.intersection(&props).cloned().collect();
    let outputs: Vec<String> = ctx.outputs.intersection(&props).cloned().collect();
    let all_inputs: Vec<String> = ctx.inputs.iter().cloned().collect();
    let all_outputs: Vec<String> = ctx.outputs.iter().cloned().collect();
    let aps: Vec<String> = inputs.iter().chain(&outputs).cloned().collect();

    let violations = Game::new(&LtlFormula::not(ctx.formula.clone()), &aps, inputs.len())?;
    let models = Game::new(&ctx.formula, &aps, inputs.len())?;
    let mut budget = options.node_budget;

    let result = 'search: {
        for k in 1..=options.max_states.max(1) {
            match violations.search_strategy(k, &mut budget) {
                Found::Yes(table) => {
                    let s = Strategy::new(inputs.clone(), outputs.clone(), 0, table)?;
                    break 'search SynthesisResult::Realizable(s.over(&all_inputs, &all_outputs)?);
                }
                Found::Exhausted => break 'search exhausted(options),
                Found::No => {}
            }
            match models.search_counterstrategy(k, &mut budget) {
                Found::Yes((emission, table)) => {
                    let c = Counterstrategy::new(inputs.clone(), outputs.clone(), 0, emission, table)?;
                    break 'search SynthesisResult::Unrealizable(c.over(&all_inputs, &all_outputs)?);
                }
                Found::Exhausted => break 'search exhausted(options),
                Found::No => {}
            }
        }
        SynthesisResult::Unknown(format!("no machine with at most {} states decides the specification", options.max_states))
    };

    match &result {
        SynthesisResult::Realizable(s) if verify(s, &ctx.formula)?.is_some() => {
            Err(SynthesisError::Verification("builtin strategy fails its own specification".into()))
        }
        SynthesisResult::Unrealizable(c) if verify_counterstrategy(c, &ctx.formula)?.is_some() => {
            Err(SynthesisError::Verification("builtin counterstrategy fails its own specification".into()))
        }
        _ => Ok(result),
    }
}

fn exhausted(options: &BuiltinOptions) -> SynthesisResult {
    SynthesisResult::Unknown(format!("search budget of {} nodes exhausted", options.node_budget))
}

enum Found<T> {
    Yes(T),
    No,
    Exhausted,
}

/// The opponent's goal as an automaton with a dense successor table.
struct Game {
    nin: usize,
    letters: usize,
    states: usize,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    /// `succ[q * letters + letter]`
    succ: Vec<Vec<usize>>,
    empty: bool,
}

impl Game {
    fn new(goal: &LtlFormula, aps: &[String], nin: usize) -> Result<Game, SynthesisError> {
        let nba: Nba = reduce(&ltl_to_nba(goal, aps)?);
        let letters = 1usize << aps.len();
        let states = nba.num_states();
        let mut succ = Vec::with_capacity(states * letters);
        for q in 0..states {
            for l in 0..letters as u64 {
                succ.push(nba.successors(q, l).collect());
            }
        }
        Ok(Game {
            nin,
            letters,
            states,
            initial: nba.initial().iter().copied().collect(),
            accepting: (0..states).map(|q| nba.is_accepting(q)).collect(),
            succ,
            empty: nba.accepting().is_empty(),
        })
    }

    fn in_vals(&self) -> usize {
        1 << self.nin
    }

    fn out_vals(&self) -> usize {
        self.letters >> self.nin
    }

    /// Whether the product of the machine given by `moves` with the goal
    /// automaton has a reachable accepting cycle. `moves(m)` lists the
    /// defined steps of machine state `m` as (successor, letter).
    fn product_accepts(&self, moves: &dyn Fn(usize, &mut Vec<(usize, usize)>)) -> bool {
        if self.empty {
            return false;
        }
        let nq = self.states;
        let mut index: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut nodes: Vec<usize> = Vec::new();
        let mut adj: Vec<Vec<usize>> = Vec::new();
        for &q in &self.initial {
            if index.insert(q, nodes.len()).is_none() {
                nodes.push(q);
            }
        }
        let mut buf = Vec::new();
        let mut k = 0;
        while k < nodes.len() {
            let (m, q) = (nodes[k] / nq, nodes[k] % nq);
            buf.clear();
            moves(m, &mut buf);
            let mut out = Vec::new();
            for &(t, letter) in &buf {
                for &d in &self.succ[q * self.letters + letter] {
                    let node = t * nq + d;
                    let id = *index.entry(node).or_insert_with(|| {
                        nodes.push(node);
                        nodes.len() - 1
                    });
                    out.push(id);
                }
            }
            adj.push(out);
            k += 1;
        }
        let accepting: Vec<bool> = nodes.iter().map(|n| self.accepting[n % nq]).collect();
        has_accepting_cycle(&adj, &accepting)
    }

    fn search_strategy(&self, k: usize, budget: &mut u64) -> Found<Vec<Vec<(usize, u64)>>> {
        let mut table: Vec<Option<(usize, u64)>> = vec![None; k * self.in_vals()];
        match self.extend_strategy(k, &mut table, 0, 0, budget) {
            Found::Yes(used) => Found::Yes(
                (0..=used)
                    .map(|s| {
                        (0..self.in_vals()).map(|i| table[s * self.in_vals() + i].expect("complete")).collect()
                    })
                    .collect(),
            ),
            Found::No => Found::No,
            Found::Exhausted => Found::Exhausted,
        }
    }

    fn extend_strategy(
        &self,
        k: usize,
        table: &mut [Option<(usize, u64)>],
        idx: usize,
        used: usize,
        budget: &mut u64,
    ) -> Found<usize> {
        let width = self.in_vals();
        if idx == (used + 1) * width {
            return Found::Yes(used);
        }
        for next in 0..=(used + 1).min(k - 1) {
            for out in 0..self.out_vals() as u64 {
                if *budget == 0 {
                    return Found::Exhausted;
                }
                *budget -= 1;
                table[idx] = Some((next, out));
                let moves = |m: usize, buf: &mut Vec<(usize, usize)>| {
                    for i in 0..width {
                        if let Some((t, o)) = table[m * width + i] {
                            buf.push((t, i | (o as usize) << self.nin));
                        }
                    }
                };
                if self.product_accepts(&moves) {
                    continue;
                }
                match self.extend_strategy(k, table, idx + 1, used.max(next), budget) {
                    Found::No => {}
                    other => return other,
                }
            }
        }
        table[idx] = None;
        Found::No
    }

    fn search_counterstrategy(&self, k: usize, budget: &mut u64) -> Found<(Vec<u64>, Vec<Vec<usize>>)> {
        let mut emission: Vec<Option<u64>> = vec![None; k];
        let mut table: Vec<Option<usize>> = vec![None; k * self.out_vals()];
        match self.extend_counterstrategy(k, &mut emission, &mut table, 0, 0, budget) {
            Found::Yes(used) => {
                let width = self.out_vals();
                Found::Yes((
                    (0..=used).map(|s| emission[s].expect("complete")).collect(),
                    (0..=used).map(|s| (0..width).map(|o| table[s * width + o].expect("complete")).collect()).collect(),
                ))
            }
            Found::No => Found::No,
            Found::Exhausted => Found::Exhausted,
        }
    }

    fn extend_counterstrategy(
        &self,
        k: usize,
        emission: &mut [Option<u64>],
        table: &mut [Option<usize>],
        idx: usize,
        used: usize,
        budget: &mut u64,
    ) -> Found<usize> {
        let width = self.out_vals();
        let slots = 1 + width;
        if idx == (used + 1) * slots {
            return Found::Yes(used);
        }
        let (s, j) = (idx / slots, idx % slots);
        let choices: Vec<(u64, usize)> = if j == 0 {
            (0..self.in_vals() as u64).map(|e| (e, used)).collect()
        } else {
            (0..=(used + 1).min(k - 1)).map(|t| (t as u64, used.max(t))).collect()
        };
        for (choice, next_used) in choices {
            if *budget == 0 {
                return Found::Exhausted;
            }
            *budget -= 1;
            if j == 0 {
                emission[s] = Some(choice);
            } else {
                table[s * width + j - 1] = Some(choice as usize);
            }
            let accepts = {
                let (emission, table) = (&*emission, &*table);
                let moves = |m: usize, buf: &mut Vec<(usize, usize)>| {
                    if let Some(e) = emission[m] {
                        for o in 0..width {
                            if let Some(t) = table[m * width + o] {
                                buf.push((t, e as usize | o << self.nin));
                            }
                        }
                    }
                };
                self.product_accepts(&moves)
            };
            if accepts {
                continue;
            }
            match self.extend_counterstrategy(k, emission, table, idx + 1, next_used, budget) {
                Found::No => {}
                other => return other,
            }
        }
        if j == 0 {
            emission[s] = None;
        } else {
            table[s * width + j - 1] = None;
        }
        Found::No
    }
}

/// Whether some strongly connected component with at least one edge
/// contains an accepting node.
fn has_accepting_cycle(adj: &[Vec<usize>], accepting: &[bool]) -> bool {
    let n = adj.len();
    let mut num = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if num[root] != usize::MAX {
            continue;
        }
        let mut call = vec![(root, 0usize)];
        num[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
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
                    let mut members = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        members.push(w);
                        if w == v {
                            break;
                        }
                    }
                    let cyclic = members.len() > 1 || adj[v].contains(&v);
                    if cyclic && members.iter().any(|m| accepting[*m]) {
                        return true;
                    }
                }
            }
        }
    }
    false
}
