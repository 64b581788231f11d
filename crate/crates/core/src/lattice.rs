//! In-place zeta and Möbius transforms on the subset lattice.
//!
//! Vectors are indexed by subset bitmask and must have a power-of-two length.
//! Each transform runs in O(n·2^n).

fn for_each_pair(xs: &mut [f64], mut op: impl FnMut(&mut f64, &mut f64)) {
    assert!(xs.len().is_power_of_two(), "lattice vector length must be 2^n");
    let mut half = 1;
    while half < xs.len() {
        for block in xs.chunks_exact_mut(half * 2) {
            let (without, with) = block.split_at_mut(half);
            for (lo, hi) in without.iter_mut().zip(with) {
                op(lo, hi);
            }
        }
        half *= 2;
    }
}

/// `f(A) <- Σ_{X ⊆ A} f(X)`.
pub fn subset_zeta(xs: &mut [f64]) {
    for_each_pair(xs, |lo, hi| *hi += *lo);
}

/// Inverse of [`subset_zeta`]: `f(A) <- Σ_{X ⊆ A} (-1)^{|A \ X|} f(X)`.
pub fn subset_mobius(xs: &mut [f64]) {
    for_each_pair(xs, |lo, hi| *hi -= *lo);
}

/// `f(A) <- Σ_{X ⊇ A} f(X)`.
pub fn superset_zeta(xs: &mut [f64]) {
    for_each_pair(xs, |lo, hi| *lo += *hi);
}

/// Inverse of [`superset_zeta`].
pub fn superset_mobius(xs: &mut [f64]) {
    for_each_pair(xs, |lo, hi| *lo -= *hi);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_subset_sums() {
        // f = [∅, {0}, {1}, {0,1}]
        let mut xs = [1.0, 2.0, 3.0, 4.0];
        subset_zeta(&mut xs);
        assert_eq!(xs, [1.0, 3.0, 4.0, 10.0]);
        subset_mobius(&mut xs);
        assert_eq!(xs, [1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn small_superset_sums() {
        let mut xs = [1.0, 2.0, 3.0, 4.0];
        superset_zeta(&mut xs);
        assert_eq!(xs, [10.0, 6.0, 7.0, 4.0]);
        superset_mobius(&mut xs);
        assert_eq!(xs, [1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn single_cell_is_untouched() {
        let mut xs = [0.25];
        subset_zeta(&mut xs);
        superset_mobius(&mut xs);
        assert_eq!(xs, [0.25]);
    }

    #[test]
    #[should_panic]
    fn rejects_non_power_of_two() {
        subset_zeta(&mut [1.0, 2.0, 3.0]);
    }
}
