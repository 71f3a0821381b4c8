use rand::seq::SliceRandom;
use rand::Rng;

use super::{unique_from, Candidate, OperatorFractions, Population};
use crate::space::{DesignSpace, Genome};

pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_894_8;

/// `x0 + (x0 - xr) / Φ`, before repair.
pub fn golden_child(x0: &[f64], xr: &[f64]) -> Vec<f64> {
    x0.iter().zip(xr).map(|(a, b)| a + (a - b) / GOLDEN_RATIO).collect()
}

/// Each elite member is pushed away from a unique random non-elite member.
/// Works on continuous values and discrete indices; the permutation is
/// copied from the elite member. The child competes with the non-elite one.
pub fn crossover<R: Rng + ?Sized>(
    pop: &Population,
    space: &DesignSpace,
    fractions: &OperatorFractions,
    rng: &mut R,
) -> Vec<Candidate> {
    if space.scalar_len() == 0 {
        return Vec::new();
    }
    let p = pop.len();
    let elites = pop.elite(fractions.elite_count(p));
    let rest: Vec<usize> = (0..p).filter(|i| !elites.contains(i)).collect();
    let partners = unique_from(&rest, elites.len(), rng);
    elites
        .iter()
        .zip(partners)
        .map(|(&e, r)| {
            let x0 = &pop.get(e).genome;
            let mut genome = Genome {
                coords: golden_child(&x0.coords, &pop.get(r).genome.coords),
                perm: x0.perm.clone(),
            };
            space.repair_genome(&mut genome);
            Candidate { genome, parent: r }
        })
        .collect()
}

/// Scatter-search child for elite rank `i` and partner rank `j` (1-based)
/// in a population of `p`, with per-component uniforms `r`.
pub fn scatter_child(xi: &[f64], xj: &[f64], i: usize, j: usize, p: usize, r: &[f64]) -> Vec<f64> {
    let alpha = if i < j { 1.0 } else { -1.0 };
    let beta = (i.abs_diff(j) as f64 - 1.0) / (p as f64 - 2.0);
    xi.iter()
        .zip(xj)
        .zip(r)
        .map(|((&a, &b), &u)| {
            let d = (b - a) / 2.0;
            let c1 = a - d * (1.0 + alpha * beta);
            let c2 = a - d * (1.0 - alpha * beta);
            c1 + (c2 - c1) * u
        })
        .collect()
}

pub fn scatter_search<R: Rng + ?Sized>(
    pop: &Population,
    space: &DesignSpace,
    fractions: &OperatorFractions,
    rng: &mut R,
) -> Vec<Candidate> {
    let p = pop.len();
    if space.scalar_len() == 0 || p < 3 {
        return Vec::new();
    }
    let ranking = pop.ranking();
    let mut out = Vec::new();
    for i in 0..fractions.elite_count(p) {
        let mut j = rng.random_range(0..p - 1);
        if j >= i {
            j += 1;
        }
        let (ei, ej) = (ranking[i], ranking[j]);
        let xi = &pop.get(ei).genome;
        let r: Vec<f64> = (0..xi.coords.len()).map(|_| rng.random()).collect();
        let mut genome = Genome {
            coords: scatter_child(&xi.coords, &pop.get(ej).genome.coords, i + 1, j + 1, p, &r),
            perm: xi.perm.clone(),
        };
        space.repair_genome(&mut genome);
        out.push(Candidate { genome, parent: ei });
    }
    out
}

/// `x + r * mask ∘ (a - b)`.
pub fn mutation_row(x: &[f64], r: f64, mask: &[bool], a: &[f64], b: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(mask)
        .zip(a.iter().zip(b))
        .map(|((&xv, &m), (&av, &bv))| if m { xv + r * (av - bv) } else { xv })
        .collect()
}

/// Differential mutation of the whole population against two random row
/// permutations of itself. Mask entries are dropped with probability `f_m`.
pub fn mutation<R: Rng + ?Sized>(
    pop: &Population,
    space: &DesignSpace,
    fractions: &OperatorFractions,
    rng: &mut R,
) -> Vec<Candidate> {
    let p = pop.len();
    let d = space.scalar_len();
    if d == 0 || p < 2 {
        return Vec::new();
    }
    let r: f64 = rng.random();
    let mut p1: Vec<usize> = (0..p).collect();
    let mut p2: Vec<usize> = (0..p).collect();
    p1.shuffle(rng);
    p2.shuffle(rng);
    (0..p)
        .map(|i| {
            let mask: Vec<bool> = (0..d).map(|_| rng.random::<f64>() >= fractions.f_mutation).collect();
            let x = &pop.get(i).genome;
            let mut genome = Genome {
                coords: mutation_row(
                    &x.coords,
                    r,
                    &mask,
                    &pop.get(p1[i]).genome.coords,
                    &pop.get(p2[i]).genome.coords,
                ),
                perm: x.perm.clone(),
            };
            space.repair_genome(&mut genome);
            Candidate { genome, parent: i }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_constant() {
        assert_eq!(GOLDEN_RATIO, (1.0 + 5f64.sqrt()) / 2.0);
    }

    #[test]
    fn golden_child_arithmetic() {
        let c = golden_child(&[1.0], &[0.0]);
        assert!((c[0] - 1.618_033_988_7).abs() < 1e-10);
        assert_eq!(golden_child(&[0.3, 2.0], &[0.3, 2.0]), vec![0.3, 2.0]);
    }

    #[test]
    fn scatter_degenerate_and_signs() {
        assert_eq!(scatter_child(&[1.0], &[1.0], 1, 5, 25, &[0.7]), vec![1.0]);
        // i=1, j=25 -> beta = 1, alpha = 1: c1 = x - 2d, c2 = x.
        let c = scatter_child(&[0.0], &[2.0], 1, 25, 25, &[0.0]);
        assert_eq!(c, vec![-2.0]);
        // i=3, j=2 -> alpha = -1, beta = 0: c1 = c2 = x - d.
        let c = scatter_child(&[0.0], &[2.0], 3, 2, 25, &[0.4]);
        assert_eq!(c, vec![-1.0]);
    }

    #[test]
    fn mutation_row_arithmetic() {
        let out = mutation_row(&[1.0, 2.0, 3.0], 0.5, &[true, false, true], &[4.0, 9.0, 0.0], &[2.0, 1.0, 2.0]);
        assert_eq!(out, vec![2.0, 2.0, 2.0]);
        assert_eq!(mutation_row(&[1.0], 0.9, &[true], &[3.0], &[3.0]), vec![1.0]);
    }
}
