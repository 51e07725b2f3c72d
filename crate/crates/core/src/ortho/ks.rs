//! Orthonormal bases inside a vector set and the Kochen–Specker decision.
//!
//! A set is Kochen–Specker when no 0/1 marking of its vectors puts exactly
//! one mark in every orthonormal basis it contains. The decision is an exact
//! search: branch on the unsatisfied basis with the fewest open members and
//! propagate (a marked vector zeroes the rest of its bases; a basis down to
//! one open member with no mark forces that member).

use serde::Serialize;

use super::VectorSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisEnumeration {
    /// Pairwise-orthogonal `d`-subsets, each sorted, in lexicographic order.
    pub bases: Vec<Vec<usize>>,
    /// Size of the search space covered, `C(|S|, d)`.
    pub subsets_covered: u128,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `d`-subsets of `s` that are pairwise orthogonal. Extends partial
/// subsets only by vectors orthogonal to every member, which covers all
/// `C(|S|, d)` subsets without visiting the ones already ruled out.
pub fn enumerate_orthobases(s: &VectorSet) -> BasisEnumeration {
    let n = s.len();
    let d = s.dim();
    let v = s.vectors();
    let ortho: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && v[i].is_orthogonal(&v[j])).collect())
        .collect();
    fn extend(ortho: &[Vec<bool>], d: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == d {
            out.push(current.clone());
            return;
        }
        for next in start..ortho.len() {
            if current.iter().all(|&c| ortho[c][next]) {
                current.push(next);
                extend(ortho, d, next + 1, current, out);
                current.pop();
            }
        }
    }
    let mut bases = Vec::new();
    extend(&ortho, d, 0, &mut Vec::new(), &mut bases);
    BasisEnumeration { bases, subsets_covered: binomial(n, d) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KsOutcome {
    /// No valid marking exists.
    Ks,
    NotKs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KsDecision {
    pub outcome: KsOutcome,
    /// A marking with exactly one mark per basis, present iff `NotKs`.
    pub witness: Option<Vec<bool>>,
    pub bases: Vec<Vec<usize>>,
    pub nodes: u64,
}

impl KsDecision {
    pub fn is_ks(&self) -> bool {
        self.outcome == KsOutcome::Ks
    }
}

/// Decides the Kochen–Specker property over every orthonormal basis in `s`.
pub fn ks_decide(s: &VectorSet) -> KsDecision {
    let bases = enumerate_orthobases(s).bases;
    ks_decide_with_bases(s.len(), bases)
}

/// Exactly-one marking search over an explicit basis list on `n` vectors.
pub fn ks_decide_with_bases(n: usize, bases: Vec<Vec<usize>>) -> KsDecision {
    let mut member_of = vec![Vec::new(); n];
    for (b, basis) in bases.iter().enumerate() {
        for &v in basis {
            member_of[v].push(b);
        }
    }
    let mut search = MarkingSearch { bases: &bases, member_of, nodes: 0 };
    let state = vec![Mark::Open; n];
    let found = search.solve(state);
    let witness = found.map(|marks| marks.into_iter().map(|m| m == Mark::One).collect());
    KsDecision {
        outcome: if witness.is_some() { KsOutcome::NotKs } else { KsOutcome::Ks },
        witness,
        nodes: search.nodes,
        bases,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mark {
    Open,
    Zero,
    One,
}

struct MarkingSearch<'a> {
    bases: &'a [Vec<usize>],
    member_of: Vec<Vec<usize>>,
    nodes: u64,
}

impl MarkingSearch<'_> {
    fn solve(&mut self, state: Vec<Mark>) -> Option<Vec<Mark>> {
        self.nodes += 1;
        // the basis without a mark that has the fewest open members
        let mut pick: Option<(usize, usize)> = None;
        for (b, basis) in self.bases.iter().enumerate() {
            if basis.iter().any(|&v| state[v] == Mark::One) {
                continue;
            }
            let open = basis.iter().filter(|&&v| state[v] == Mark::Open).count();
            if open == 0 {
                return None;
            }
            if pick.is_none_or(|(_, best)| open < best) {
                pick = Some((b, open));
            }
        }
        let Some((b, _)) = pick else {
            let mut done = state;
            for m in &mut done {
                if *m == Mark::Open {
                    *m = Mark::Zero;
                }
            }
            return Some(done);
        };
        for &v in &self.bases[b] {
            if state[v] != Mark::Open {
                continue;
            }
            let mut next = state.clone();
            if self.set(&mut next, v, Mark::One) {
                if let Some(found) = self.solve(next) {
                    return Some(found);
                }
            }
        }
        None
    }

    // Assigns and propagates; false on contradiction.
    fn set(&self, state: &mut [Mark], v: usize, mark: Mark) -> bool {
        let mut queue = vec![(v, mark)];
        while let Some((v, mark)) = queue.pop() {
            match state[v] {
                Mark::Open => state[v] = mark,
                current if current == mark => continue,
                _ => return false,
            }
            for &b in &self.member_of[v] {
                let basis = &self.bases[b];
                match mark {
                    Mark::One => queue.extend(basis.iter().filter(|&&w| w != v).map(|&w| (w, Mark::Zero))),
                    Mark::Zero => {
                        if basis.iter().any(|&w| state[w] == Mark::One) {
                            continue;
                        }
                        let open: Vec<usize> = basis.iter().copied().filter(|&w| state[w] == Mark::Open).collect();
                        match open.len() {
                            0 => return false,
                            1 => queue.push((open[0], Mark::One)),
                            _ => {}
                        }
                    }
                    Mark::Open => unreachable!(),
                }
            }
        }
        true
    }
}
