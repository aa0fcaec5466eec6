//! Breadth-first search for pi-pulse assignments between checkpoints.

use std::collections::{HashMap, VecDeque};

use num_complex::Complex64;

use super::{Checkpoint, CheckpointBranch, ParametricKet, Pulse, PulseAlphabet, PulseSequence};
use crate::error::{Error, Result};

const QUANTUM: f64 = 1e-7;
const MAX_STATES: usize = 4_000_000;

type Row = (Complex64, Complex64);
type Key = Vec<[i64; 4]>;

fn rows(k: &ParametricKet) -> Vec<Row> {
    (0..k.dim())
        .map(|i| (k.alpha.amplitude(i), k.beta.amplitude(i)))
        .collect()
}

fn quantize(x: f64) -> i64 {
    let q = (x / QUANTUM).round() as i64;
    // -0 and +0 share a key
    if q == 0 {
        0
    } else {
        q
    }
}

fn key(state: &[Row]) -> Key {
    state
        .iter()
        .map(|(a, b)| {
            [
                quantize(a.re),
                quantize(a.im),
                quantize(b.re),
                quantize(b.im),
            ]
        })
        .collect()
}

/// Row magnitudes as a sorted multiset; pi pulses only permute these.
fn magnitude_classes(state: &[Row]) -> Vec<(i64, i64)> {
    let mut m: Vec<(i64, i64)> = state
        .iter()
        .map(|(a, b)| (quantize(a.norm()), quantize(b.norm())))
        .collect();
    m.sort_unstable();
    m
}

fn apply(state: &[Row], pulse: &Pulse) -> Vec<Row> {
    let mut next = state.to_vec();
    let (c, s) = pulse.block();
    let (a, b) = (state[pulse.low], state[pulse.high]);
    next[pulse.low] = (a.0 * c - b.0 * s, a.1 * c - b.1 * s);
    next[pulse.high] = (a.0 * s + b.0 * c, a.1 * s + b.1 * c);
    next
}

fn shortest_path(from: &[Row], to: &[Row], moves: &[Pulse]) -> Option<Vec<Pulse>> {
    let goal = key(to);
    let start = key(from);
    if start == goal {
        return Some(Vec::new());
    }
    let mut parent: HashMap<Key, (Key, Pulse)> = HashMap::new();
    let mut queue = VecDeque::from([from.to_vec()]);
    parent.insert(start.clone(), (Vec::new(), moves[0]));
    while let Some(state) = queue.pop_front() {
        let here = key(&state);
        for m in moves {
            let next = apply(&state, m);
            let k = key(&next);
            if parent.contains_key(&k) {
                continue;
            }
            parent.insert(k.clone(), (here.clone(), *m));
            if k == goal {
                let mut path = Vec::new();
                let mut cur = k;
                while cur != start {
                    let (prev, pulse) = parent[&cur].clone();
                    path.push(pulse);
                    cur = prev;
                }
                path.reverse();
                return Some(path);
            }
            if parent.len() > MAX_STATES {
                return None;
            }
            queue.push_back(next);
        }
    }
    None
}

/// Finds a shortest pi-pulse sequence (phase flags allowed) through the
/// given parametric checkpoints using only pairs the alphabet allows.
///
/// Fails with [`Error::SynthesisFailure`] naming the first checkpoint that
/// cannot be reached from its predecessor.
pub fn synthesize_pi_targets(
    checkpoints: &[ParametricKet],
    alphabet: PulseAlphabet,
) -> Result<PulseSequence> {
    let first = checkpoints
        .first()
        .ok_or_else(|| Error::invalid("at least one checkpoint is required"))?;
    let dim = first.dim();
    let moves: Vec<Pulse> = alphabet
        .pairs(dim)
        .into_iter()
        .flat_map(|(lo, hi)| [Pulse::pi(lo, hi), Pulse::pi(lo, hi).with_phase_flag(true)])
        .collect();
    if moves.is_empty() {
        return Err(Error::invalid("no addressable level pairs"));
    }

    let mut pulses = Vec::new();
    let mut marks = Vec::new();
    for (i, pair) in checkpoints.windows(2).enumerate() {
        if pair[1].dim() != dim {
            return Err(Error::invalid("checkpoints differ in dimension"));
        }
        let (from, to) = (rows(&pair[0]), rows(&pair[1]));
        if magnitude_classes(&from) != magnitude_classes(&to) {
            return Err(Error::SynthesisFailure { checkpoint: i + 1 });
        }
        let segment = shortest_path(&from, &to, &moves)
            .ok_or(Error::SynthesisFailure { checkpoint: i + 1 })?;
        pulses.extend(segment);
        marks.push(Checkpoint {
            after: pulses.len(),
            expected: pair[1].clone(),
        });
    }
    let mut seq = PulseSequence::new("synthesized", pulses);
    seq.branches.push(CheckpointBranch {
        name: "synthesized".into(),
        input: first.clone(),
        checkpoints: marks,
    });
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_swap_with_sign() {
        let a = ParametricKet::from_entries(4, &[(1, 1.0, 0.0), (2, 0.0, 1.0)]);
        // pi(1,2): new_1 = -old_2, new_2 = old_1
        let b = ParametricKet::from_entries(4, &[(2, 1.0, 0.0), (1, 0.0, -1.0)]);
        let seq = synthesize_pi_targets(&[a, b], PulseAlphabet::Adjacent).unwrap();
        assert_eq!(seq.pulses, vec![Pulse::pi(1, 2)]);
        assert!(seq
            .verify_checkpoints()
            .unwrap()
            .iter()
            .all(|c| c.deviation < 1e-12));
    }

    #[test]
    fn magnitude_change_is_unreachable() {
        let a = ParametricKet::from_entries(3, &[(0, 1.0, 0.0)]);
        let b = ParametricKet::from_entries(3, &[(0, 0.6, 0.0), (1, 0.8, 0.0)]);
        let c = ParametricKet::from_entries(3, &[(2, 1.0, 0.0)]);
        assert!(matches!(
            synthesize_pi_targets(&[a.clone(), c, b], PulseAlphabet::Adjacent),
            Err(Error::SynthesisFailure { checkpoint: 2 })
        ));
    }

    #[test]
    fn extended_alphabet_shortens_long_moves() {
        let a = ParametricKet::pair(8, 3, 4);
        let b = ParametricKet::pair(8, 0, 7);
        let adj = synthesize_pi_targets(&[a.clone(), b.clone()], PulseAlphabet::Adjacent).unwrap();
        let ext = synthesize_pi_targets(&[a, b], PulseAlphabet::Extended).unwrap();
        assert_eq!(adj.len(), 6);
        assert_eq!(ext.len(), 4);
    }
}
