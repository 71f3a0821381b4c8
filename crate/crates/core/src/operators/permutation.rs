use rand::Rng;

use super::{unique_from, Evaluator, OperatorFractions, Population};
use crate::error::{Error, Result};
use crate::levy::LevySampler;
use crate::space::{DesignSpace, Genome};

/// Per-city candidate lists, nearest first, used to bias second cut points.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborLists(pub Vec<Vec<usize>>);

impl NeighborLists {
    /// Keeps the `k` nearest other cities for every city of a distance matrix.
    pub fn from_distances(dist: &[Vec<i64>], k: usize) -> Self {
        let n = dist.len();
        let lists = (0..n)
            .map(|i| {
                let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                others.sort_by_key(|&j| (dist[i][j], j));
                others.truncate(k.max(1));
                others
            })
            .collect();
        Self(lists)
    }
}

/// Number of positions after `cut` at which the truncated-flight-selected
/// near neighbour of `perm[cut]` sits (cyclically), at least 1.
pub(crate) fn biased_partner(perm: &[usize], cut: usize, t: f64, lists: &NeighborLists) -> usize {
    let n = perm.len();
    let list = &lists.0[perm[cut]];
    let k = ((t * (list.len() - 1) as f64).round() as usize).min(list.len() - 1);
    let pos = perm.iter().position(|&c| c == list[k]).unwrap_or((cut + 1) % n);
    match (pos + n - cut) % n {
        0 => 1,
        span => span,
    }
}

/// Reverses `len` consecutive elements starting at `start`, wrapping around.
pub fn reverse_cyclic<T>(seq: &mut [T], start: usize, len: usize) {
    let n = seq.len();
    if n == 0 {
        return;
    }
    let len = len.min(n);
    for k in 0..len / 2 {
        seq.swap((start + k) % n, (start + len - 1 - k) % n);
    }
}

/// Children `S1 S3 S2 S4` and `S1 S2' S3' S4` for break positions
/// `b1 < b2 < b3`, where each segment ends at its break point and `'`
/// denotes reversal.
pub fn three_opt_children(perm: &[usize], b1: usize, b2: usize, b3: usize) -> (Vec<usize>, Vec<usize>) {
    debug_assert!(b1 < b2 && b2 < b3 && b3 < perm.len());
    let s1 = &perm[..=b1];
    let s2 = &perm[b1 + 1..=b2];
    let s3 = &perm[b2 + 1..=b3];
    let s4 = &perm[b3 + 1..];
    let c1 = [s1, s3, s2, s4].concat();
    let mut c2 = perm.to_vec();
    c2[b1 + 1..=b2].reverse();
    c2[b2 + 1..=b3].reverse();
    (c1, c2)
}

/// Connects the element at `i` to the one at `j` by reversing the run
/// between them.
pub fn two_opt_child(perm: &[usize], i: usize, j: usize, looping: bool) -> Vec<usize> {
    let n = perm.len();
    let mut child = perm.to_vec();
    if looping {
        reverse_cyclic(&mut child, (i + 1) % n, (j + n - i) % n);
    } else if j > i {
        child[i + 1..=j].reverse();
    } else if j < i {
        child[j..i].reverse();
    }
    child
}

/// Makes the element at `follower` adjacent to the one at `anchor` by
/// reversing the span between them.
pub fn join_follower<T: Clone>(seq: &[T], anchor: usize, follower: usize) -> Vec<T> {
    let mut out = seq.to_vec();
    if follower > anchor {
        out[anchor + 1..=follower].reverse();
    } else if follower < anchor {
        out[follower..anchor].reverse();
    }
    out
}

fn position_of<T: PartialEq>(seq: &[T], value: &T, avoid: usize) -> Option<usize> {
    seq.iter()
        .enumerate()
        .filter(|&(i, v)| v == value && i != avoid)
        .map(|(i, _)| i)
        .next()
        .or_else(|| seq.iter().position(|v| v == value))
}

fn successor(pos: usize, n: usize, looping: bool) -> Option<usize> {
    if pos + 1 < n {
        Some(pos + 1)
    } else if looping {
        Some(0)
    } else {
        None
    }
}

/// Three random unique break points per parent; `S1 S3 S2 S4` replaces the
/// parent when better, then `S1 S2' S3' S4` replaces the incumbent when better.
pub fn three_opt<R: Rng + ?Sized>(pop: &mut Population, eval: &Evaluator, rng: &mut R) -> Result<()> {
    let n = pop.get(0).genome.perm.len();
    if n < 4 {
        return Err(Error::PermutationTooShort(n));
    }
    for i in 0..pop.len() {
        let mut breaks = rand::seq::index::sample(rng, n - 1, 3).into_vec();
        breaks.sort_unstable();
        let parent = pop.get(i).genome.clone();
        let (c1, c2) = three_opt_children(&parent.perm, breaks[0], breaks[1], breaks[2]);
        for perm in [c1, c2] {
            if perm != pop.get(i).genome.perm {
                let child = eval.member(Genome { coords: parent.coords.clone(), perm })?;
                pop.offer(i, child);
            }
        }
    }
    Ok(())
}

/// Sequence the inversion crossover works on: the permutation when there is
/// one, otherwise the discrete indices.
fn sequence(g: &Genome, space: &DesignSpace) -> Vec<i64> {
    if space.has_permutation() {
        g.perm.iter().map(|&v| v as i64).collect()
    } else {
        space.discrete_slots().iter().map(|&s| g.coords[s] as i64).collect()
    }
}

fn with_sequence(g: &Genome, space: &DesignSpace, seq: &[i64]) -> Genome {
    let mut out = g.clone();
    if space.has_permutation() {
        out.perm = seq.iter().map(|&v| v as usize).collect();
    } else {
        for (&s, &v) in space.discrete_slots().iter().zip(seq) {
            out.coords[s] = v as f64;
        }
        // Slots can differ in cardinality, so a moved index may not fit.
        space.repair_genome(&mut out);
    }
    out
}

/// For every elite parent `P1` and a unique random partner `P2`, cycle the
/// first inversion point over all positions of `P1`. The element following
/// it in `P2` is joined to it in `P1` (child `C1`, tried against `P1`);
/// then the element following that one in the pre-step `P1` is joined to it
/// in `P2` (child `C2`, tried against `P2`).
pub fn inversion_crossover<R: Rng + ?Sized>(
    pop: &mut Population,
    space: &DesignSpace,
    fractions: &OperatorFractions,
    eval: &Evaluator,
    rng: &mut R,
) -> Result<()> {
    let looping = !space.has_permutation() || space.permutation_looping();
    let p = pop.len();
    let elites = pop.elite(fractions.elite_count(p));
    let mut taken = elites.clone();
    for e in elites {
        let pool: Vec<usize> = (0..p).filter(|i| !taken.contains(i)).collect();
        let partner = match unique_from(&pool, 1, rng).first() {
            Some(&r) => r,
            None => continue,
        };
        taken.push(partner);
        let n = sequence(&pop.get(e).genome, space).len();
        if n < 2 {
            continue;
        }
        for i in 0..n {
            let p1 = sequence(&pop.get(e).genome, space);
            let p2 = sequence(&pop.get(partner).genome, space);
            let Some(in_p2) = position_of(&p2, &p1[i], usize::MAX) else { continue };
            let Some(next2) = successor(in_p2, n, looping) else { continue };
            let Some(j1) = position_of(&p1, &p2[next2], i) else { continue };

            // Already adjacent (also across the wrap of a loop): nothing to do.
            let c1 = if successor(i, n, looping) == Some(j1) { p1.clone() } else { join_follower(&p1, i, j1) };
            if c1 != p1 {
                let child = eval.member(with_sequence(&pop.get(e).genome, space, &c1))?;
                pop.offer(e, child);
            }

            let Some(next1) = successor(j1, n, looping) else { continue };
            let Some(j2) = position_of(&p2, &p1[next1], next2) else { continue };
            let c2 =
                if successor(next2, n, looping) == Some(j2) { p2.clone() } else { join_follower(&p2, next2, j2) };
            if c2 != p2 {
                let child = eval.member(with_sequence(&pop.get(partner).genome, space, &c2))?;
                pop.offer(partner, child);
            }
        }
    }
    Ok(())
}

/// For each elite parent the first break cycles through the positions
/// (`n` for tours, `n - 2` for open sequences); the second break is a
/// truncated-flight offset, or a near neighbour when `neighbors` is given.
pub fn two_opt<R: Rng + ?Sized>(
    pop: &mut Population,
    space: &DesignSpace,
    fractions: &OperatorFractions,
    sampler: &LevySampler,
    neighbors: Option<&NeighborLists>,
    eval: &Evaluator,
    rng: &mut R,
) -> Result<()> {
    let looping = space.permutation_looping();
    let n = space.permutation_len();
    if n < 3 {
        return Ok(());
    }
    let starts = if looping { n } else { n - 2 };
    for e in pop.elite(fractions.elite_count(pop.len())) {
        for i in 0..starts {
            let t = sampler.sample_truncated(rng)?;
            let current = pop.get(e).genome.clone();
            let offset = match neighbors {
                Some(lists) => biased_partner(&current.perm, i, t, lists),
                None => 1 + (t * (n - 2) as f64).round() as usize,
            };
            let j = if looping { (i + offset) % n } else { (i + offset).min(n - 1) };
            let perm = two_opt_child(&current.perm, i, j, looping);
            if perm != current.perm {
                let child = eval.member(Genome { coords: current.coords, perm })?;
                pop.offer(e, child);
            }
        }
    }
    Ok(())
}
