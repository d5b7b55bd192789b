//! Shared test support: the brute-force Whitehead-BFS oracle.
//!
//! The oracle is deliberately independent of the greedy minimization path it
//! cross-checks: it explores the full ball of tuples reachable by Whitehead
//! moves without ever exceeding the starting total length, and answers
//! reachability questions by exhaustion.

use pbcx_core::autos::whitehead_moves;
use pbcx_core::freegroup::{ReducedWord, WordTuple};
use std::collections::{HashSet, VecDeque};

/// All tuples reachable from `start` by Whitehead moves through tuples of
/// total length at most `cap`.
pub fn reachable_ball(start: &WordTuple, cap: usize) -> HashSet<WordTuple> {
    let moves = whitehead_moves(start.rank());
    let mut seen: HashSet<WordTuple> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(t) = queue.pop_front() {
        for mv in &moves {
            let image = mv.apply_tuple(&t);
            if image.total_length() > cap {
                continue;
            }
            if seen.insert(image.clone()) {
                queue.push_back(image);
            }
        }
    }
    seen
}

/// Minimal total length in the reachable ball.
pub fn oracle_min_length(start: &WordTuple) -> usize {
    reachable_ball(start, start.total_length())
        .iter()
        .map(|t| t.total_length())
        .min()
        .expect("ball contains the start")
}

/// Oracle partial-basis decision: some reachable tuple consists of single
/// letters in pairwise distinct generator orbits.
pub fn oracle_is_partial_basis(words: &[ReducedWord], rank: usize) -> bool {
    let mut sorted = words.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.is_empty() || sorted.len() > rank {
        return false;
    }
    let start = WordTuple::new(sorted, rank).expect("equal ranks");
    reachable_ball(&start, start.total_length()).iter().any(|t| {
        let mut orbits = HashSet::new();
        t.entries().iter().all(|w| {
            w.is_single_letter()
                .is_some_and(|l| orbits.insert(l.index()))
        })
    })
}
