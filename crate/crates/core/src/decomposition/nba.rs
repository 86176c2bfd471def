//! Exact decomposition of Büchi automata by projection onto output groups.

use std::collections::BTreeSet;

use super::DecompositionError;
use crate::automata::{complement_with, intersection, project, reduce, ComplementLimits, Nba};

/// Decomposes `a` into automata over pairwise disjoint output sets whose
/// composition recognizes exactly `L(a)`.
///
/// Output subsets `X` are tried by increasing size, then
/// lexicographically; `X` and its complement `Y` are checked once. A split
/// is accepted iff `L(π_X(a)) ∩ L(π_Y(a)) ⊆ L(a)`, and both halves are then
/// decomposed further. If no split exists `a` is returned unchanged.
pub fn decompose_nba(a: &Nba) -> Result<Vec<Nba>, DecompositionError> {
    decompose_nba_with(a, &ComplementLimits::default())
}

pub fn decompose_nba_with(a: &Nba, limits: &ComplementLimits) -> Result<Vec<Nba>, DecompositionError> {
    let outputs: Vec<String> = a.outputs().iter().cloned().collect();
    let inputs = a.inputs();
    let mut out = Vec::new();
    split(a, &inputs, &outputs, limits, &mut out)?;
    Ok(out)
}

/// The two halves of the first valid split of `a`, if any.
pub fn find_split(a: &Nba, limits: &ComplementLimits) -> Result<Option<(Nba, Nba)>, DecompositionError> {
    let outputs: Vec<String> = a.outputs().iter().cloned().collect();
    first_split(a, &a.inputs(), &outputs, limits)
}

fn split(
    a: &Nba,
    inputs: &BTreeSet<String>,
    outputs: &[String],
    limits: &ComplementLimits,
    out: &mut Vec<Nba>,
) -> Result<(), DecompositionError> {
    match first_split(a, inputs, outputs, limits)? {
        None => out.push(a.clone()),
        Some((ax, ay)) => {
            let xs: Vec<String> = ax.outputs().iter().cloned().collect();
            let ys: Vec<String> = ay.outputs().iter().cloned().collect();
            split(&ax, inputs, &xs, limits, out)?;
            split(&ay, inputs, &ys, limits, out)?;
        }
    }
    Ok(())
}

fn first_split(
    a: &Nba,
    inputs: &BTreeSet<String>,
    outputs: &[String],
    limits: &ComplementLimits,
) -> Result<Option<(Nba, Nba)>, DecompositionError> {
    let n = outputs.len();
    if n < 2 {
        return Ok(None);
    }
    let complement = complement_with(a, limits)?;
    let mut checked: BTreeSet<Vec<usize>> = BTreeSet::new();
    for size in 1..n {
        for x in combinations(n, size) {
            let y: Vec<usize> = (0..n).filter(|k| !x.contains(k)).collect();
            let key = if x <= y { x.clone() } else { y.clone() };
            if !checked.insert(key) {
                continue;
            }
            let half = |idx: &[usize]| -> Result<Nba, DecompositionError> {
                let keep: BTreeSet<String> = inputs.iter().cloned().chain(idx.iter().map(|k| outputs[*k].clone())).collect();
                Ok(reduce(&project(a, &keep)?))
            };
            let ax = half(&x)?;
            let ay = half(&y)?;
            let joint = reduce(&intersection(&ax, &ay)?);
            if intersection(&joint, &complement)?.is_empty() {
                return Ok(Some((ax, ay)));
            }
        }
    }
    Ok(None)
}

/// All `size`-element subsets of `0..n` in lexicographic order.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..size).collect();
    if size > n {
        return out;
    }
    loop {
        out.push(current.clone());
        let Some(k) = (0..size).rev().find(|&k| current[k] < n - size + k) else {
            return out;
        };
        current[k] += 1;
        for j in k + 1..size {
            current[j] = current[j - 1] + 1;
        }
    }
}
