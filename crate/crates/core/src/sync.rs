//! Synchronizing words of deterministic automata.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::transducer::Transducer;

/// Largest automaton for which the shortest word is found by subset search.
pub const EXACT_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyncError {
    #[error("automaton is not complete")]
    Incomplete,
    #[error("automaton has no states")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyncResult {
    Synchronizing {
        word: Vec<usize>,
        /// Whether `word` is known to be a shortest one.
        shortest: bool,
        pair_graph_size: usize,
    },
    NotSynchronizing { pair_graph_size: usize },
}

impl SyncResult {
    pub fn word(&self) -> Option<&[usize]> {
        match self {
            SyncResult::Synchronizing { word, .. } => Some(word),
            SyncResult::NotSynchronizing { .. } => None,
        }
    }

    pub fn pair_graph_size(&self) -> usize {
        match self {
            SyncResult::Synchronizing { pair_graph_size, .. } | SyncResult::NotSynchronizing { pair_graph_size } => {
                *pair_graph_size
            }
        }
    }

    pub fn to_json(&self, letter: &dyn Fn(usize) -> String) -> Json {
        match self {
            SyncResult::Synchronizing { word, shortest, pair_graph_size } => json!({
                "synchronizing": true,
                "word": word.iter().map(|&a| letter(a)).collect::<String>(),
                "shortest": shortest,
                "pair_graph_size": pair_graph_size,
            }),
            SyncResult::NotSynchronizing { pair_graph_size } => json!({
                "synchronizing": false,
                "pair_graph_size": pair_graph_size,
            }),
        }
    }
}

/// Index of the unordered pair `{p, q}`, `p ≤ q`, among `k(k+1)/2`.
fn pair_index(k: usize, p: usize, q: usize) -> usize {
    let (p, q) = if p <= q { (p, q) } else { (q, p) };
    p * k - p * (p + 1) / 2 + q
}

fn next(t: &Transducer, s: usize, a: usize) -> usize {
    t.edge(s, a).expect("complete automaton").target
}

/// Checks synchronizability on the pair graph and returns a synchronizing
/// word, shortest when the automaton has at most [`EXACT_LIMIT`] states.
pub fn sync_check(t: &Transducer) -> Result<SyncResult, SyncError> {
    let k = t.state_count();
    if k == 0 {
        return Err(SyncError::Empty);
    }
    if !t.is_complete() {
        return Err(SyncError::Incomplete);
    }
    let size = k * (k + 1) / 2;
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|p| (p..k).map(move |q| (p, q))).collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); size];
    for &(p, q) in &pairs {
        for a in 0..t.alphabet() {
            let to = pair_index(k, next(t, p, a), next(t, q, a));
            preds[to].push(pair_index(k, p, q));
        }
    }
    let mut reach = vec![false; size];
    let mut queue: VecDeque<usize> = (0..k).map(|p| pair_index(k, p, p)).collect();
    for &d in &queue {
        reach[d] = true;
    }
    while let Some(x) = queue.pop_front() {
        for &y in &preds[x] {
            if !reach[y] {
                reach[y] = true;
                queue.push_back(y);
            }
        }
    }
    if !reach.iter().all(|&r| r) {
        return Ok(SyncResult::NotSynchronizing { pair_graph_size: size });
    }
    let (word, shortest) = if k <= EXACT_LIMIT { (shortest_word(t), true) } else { (greedy_word(t), false) };
    Ok(SyncResult::Synchronizing { word, shortest, pair_graph_size: size })
}

/// Repeatedly merges two states of the current set along a shortest merging
/// word of the pair.
pub fn greedy_word(t: &Transducer) -> Vec<usize> {
    let mut set: Vec<usize> = (0..t.state_count()).collect();
    let mut word = Vec::new();
    while set.len() > 1 {
        let w = merging_word(t, set[0], set[1]).expect("synchronizable pairs merge");
        for &a in &w {
            for s in set.iter_mut() {
                *s = next(t, *s, a);
            }
        }
        set.sort_unstable();
        set.dedup();
        word.extend(w);
    }
    word
}

fn merging_word(t: &Transducer, p: usize, q: usize) -> Option<Vec<usize>> {
    let k = t.state_count();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; k * (k + 1) / 2];
    let start = pair_index(k, p, q);
    let mut seen = vec![false; prev.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([(p, q)]);
    while let Some((x, y)) = queue.pop_front() {
        if x == y {
            let mut w = Vec::new();
            let mut cur = pair_index(k, x, y);
            while let Some((from, a)) = prev[cur] {
                w.push(a);
                cur = from;
            }
            w.reverse();
            return Some(w);
        }
        for a in 0..t.alphabet() {
            let (x2, y2) = (next(t, x, a), next(t, y, a));
            let i = pair_index(k, x2, y2);
            if !seen[i] {
                seen[i] = true;
                prev[i] = Some((pair_index(k, x, y), a));
                queue.push_back((x2, y2));
            }
        }
    }
    None
}

/// Breadth-first search over subsets of states.
fn shortest_word(t: &Transducer) -> Vec<usize> {
    let k = t.state_count();
    let full: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let image = |set: u32, a: usize| -> u32 {
        (0..k).filter(|&s| set >> s & 1 == 1).fold(0, |acc, s| acc | 1 << next(t, s, a))
    };
    let mut prev: Vec<Option<(u32, usize)>> = vec![None; 1 << k];
    let mut seen = vec![false; 1 << k];
    seen[full as usize] = true;
    let mut queue = VecDeque::from([full]);
    while let Some(set) = queue.pop_front() {
        if set.count_ones() == 1 {
            let mut w = Vec::new();
            let mut cur = set;
            while let Some((from, a)) = prev[cur as usize] {
                w.push(a);
                cur = from;
            }
            w.reverse();
            return w;
        }
        for a in 0..t.alphabet() {
            let img = image(set, a);
            if !seen[img as usize] {
                seen[img as usize] = true;
                prev[img as usize] = Some((set, a));
                queue.push_back(img);
            }
        }
    }
    unreachable!("called only on synchronizable automata")
}

/// State reached from every state by reading `w`, if they all agree.
pub fn reset_state(t: &Transducer, w: &[usize]) -> Option<usize> {
    let mut ends = (0..t.state_count()).map(|s| w.iter().fold(s, |u, &a| next(t, u, a)));
    let first = ends.next()?;
    ends.all(|e| e == first).then_some(first)
}

/// Random inputs read from the set of all states at once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResetSampling {
    pub samples: usize,
    pub length: usize,
    /// Inputs after which the set of possible states is still not a
    /// singleton.
    pub unsynchronized: usize,
}

impl ResetSampling {
    pub fn fraction(&self) -> f64 {
        self.unsynchronized as f64 / self.samples as f64
    }

    pub fn to_json(&self) -> Json {
        json!({
            "samples": self.samples,
            "length": self.length,
            "unsynchronized": self.unsynchronized,
            "fraction": self.fraction(),
        })
    }
}

pub fn reset_sampling(t: &Transducer, samples: usize, length: usize, seed: u64) -> ResetSampling {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unsynchronized = 0;
    for _ in 0..samples {
        let mut set: Vec<usize> = (0..t.state_count()).collect();
        for _ in 0..length {
            let a = rng.gen_range(0..t.alphabet());
            for s in set.iter_mut() {
                *s = next(t, *s, a);
            }
            set.sort_unstable();
            set.dedup();
        }
        if set.len() > 1 {
            unsynchronized += 1;
        }
    }
    ResetSampling { samples, length, unsynchronized }
}
