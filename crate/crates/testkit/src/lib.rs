//! Test support: brute-force oracles and random mass functions.
//!
//! Everything here works on plain dense vectors indexed by subset bitmask and
//! deliberately shares no code with `tbm-core`. Each oracle is the textbook
//! enumeration of its definition, O(4^n) where the library uses O(n·2^n).

use rand::seq::index::sample;
use rand::Rng;

pub type Dense = Vec<f64>;

pub fn full(n: usize) -> usize {
    (1 << n) - 1
}

fn is_subset(x: usize, a: usize) -> bool {
    x & !a == 0
}

/// Random mass function on `n` worlds: `k` focal sets drawn uniformly from
/// `1..=2^n` without replacement, ∅ among them with probability ½, masses
/// from a flat Dirichlet.
pub fn random_mass<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Dense {
    let size = 1usize << n;
    let k = rng.gen_range(1..=size);
    let with_empty = rng.gen_bool(0.5);
    let mut focal: Vec<usize> = Vec::with_capacity(k);
    let non_empty = if with_empty {
        focal.push(0);
        k - 1
    } else {
        k.min(size - 1)
    };
    focal.extend(sample(rng, size - 1, non_empty).into_iter().map(|i| i + 1));
    let weights: Vec<f64> = focal
        .iter()
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    let mut m = vec![0.0; size];
    for (&set, w) in focal.iter().zip(weights) {
        m[set] = w / total;
    }
    m
}

/// `Σ_{∅ ≠ X ⊆ A} m(X)`.
pub fn bel(m: &[f64], a: usize) -> f64 {
    (1..m.len()).filter(|&x| is_subset(x, a)).map(|x| m[x]).sum()
}

/// `Σ_{X ∩ A ≠ ∅} m(X)`.
pub fn pl(m: &[f64], a: usize) -> f64 {
    (0..m.len()).filter(|&x| x & a != 0).map(|x| m[x]).sum()
}

/// `Σ_{X ⊇ A} m(X)`.
pub fn commonality(m: &[f64], a: usize) -> f64 {
    (0..m.len()).filter(|&x| is_subset(a, x)).map(|x| m[x]).sum()
}

pub fn bel_vector(m: &[f64]) -> Dense {
    (0..m.len()).map(|a| bel(m, a)).collect()
}

pub fn pl_vector(m: &[f64]) -> Dense {
    (0..m.len()).map(|a| pl(m, a)).collect()
}

pub fn commonality_vector(m: &[f64]) -> Dense {
    (0..m.len()).map(|a| commonality(m, a)).collect()
}

/// `m(A) = Σ_{∅ ≠ B ⊆ A} (-1)^{|A \ B|} bel(B)` for `A ≠ ∅`, and `m(∅) = 1 -`
/// the rest. `bel` is the full `2^n` vector.
pub fn mass_from_bel(bel: &[f64]) -> Dense {
    let mut m = vec![0.0; bel.len()];
    for a in 1..bel.len() {
        m[a] = (1..bel.len())
            .filter(|&b| is_subset(b, a))
            .map(|b| {
                let sign = if (a & !b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                sign * bel[b]
            })
            .sum();
    }
    m[0] = 1.0 - m[1..].iter().sum::<f64>();
    m
}

/// `m(A) = Σ_{B ⊇ A} (-1)^{|B \ A|} q(B)`.
pub fn mass_from_commonality(q: &[f64]) -> Dense {
    (0..q.len())
        .map(|a| {
            (0..q.len())
                .filter(|&b| is_subset(a, b))
                .map(|b| {
                    let sign = if (b & !a).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    sign * q[b]
                })
                .sum()
        })
        .collect()
}

/// Unnormalized conditioning written as the sum over the removed worlds:
/// `m_A(B) = Σ_{X ⊆ Ā} m(B ∪ X)` for `B ⊆ A`, zero elsewhere.
pub fn condition(m: &[f64], n: usize, a: usize) -> Dense {
    let rest = full(n) & !a;
    let mut out = vec![0.0; m.len()];
    for b in 0..m.len() {
        if !is_subset(b, a) {
            continue;
        }
        out[b] = (0..m.len())
            .filter(|&x| is_subset(x, rest))
            .map(|x| m[b | x])
            .sum();
    }
    out
}

/// `m(C) = Σ_{X ∩ Y = C} m1(X) m2(Y)` over every pair of subsets.
pub fn combine(m1: &[f64], m2: &[f64]) -> Dense {
    let mut out = vec![0.0; m1.len()];
    for x in 0..m1.len() {
        for y in 0..m2.len() {
            out[x & y] += m1[x] * m2[y];
        }
    }
    out
}

/// Outer-image pushforward for the coarsening given by `block_of[world]`.
pub fn coarsen(m: &[f64], block_of: &[usize], blocks: usize) -> Dense {
    let mut out = vec![0.0; 1 << blocks];
    for (x, &mass) in m.iter().enumerate() {
        let mut image = 0;
        for (world, &b) in block_of.iter().enumerate() {
            if x & (1 << world) != 0 {
                image |= 1 << b;
            }
        }
        out[image] += mass;
    }
    out
}

/// `BetP(ω) = Σ_{A ∋ ω} m(A) / (|A| (1 - m(∅)))`.
pub fn pignistic(m: &[f64], n: usize) -> Dense {
    let denom = 1.0 - m[0];
    (0..n)
        .map(|w| {
            (1..m.len())
                .filter(|&x| x & (1 << w) != 0)
                .map(|x| m[x] / (x.count_ones() as f64 * denom))
                .sum()
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
