use super::AlgebraError;

/// Length of the shortest `p` dividing `w.len()` with `w = root^(len/p)`.
pub fn primitive_root_len<S: PartialEq>(w: &[S]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p]))
        .unwrap_or(0)
}

pub fn primitive_root<S: PartialEq>(w: &[S]) -> &[S] {
    &w[..primitive_root_len(w)]
}

/// True iff `b` is a cyclic rotation of `a`.
pub fn is_rotation<S: PartialEq>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len() && (0..a.len().max(1)).any(|k| (0..a.len()).all(|i| a[(i + k) % a.len()] == b[i]))
}

/// The lexicographically least rotation; a canonical key for rotation classes.
pub fn least_rotation<S: Ord + Clone>(w: &[S]) -> Vec<S> {
    let n = w.len();
    (0..n.max(1))
        .map(|k| w[k..].iter().chain(&w[..k]).cloned().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Whether `u^ω` and `w^ω` have a common tail, i.e. the primitive roots of
/// `u` and `w` are rotations of each other.
pub fn conjugacy_of_periodic<S: PartialEq>(u: &[S], w: &[S]) -> Result<bool, AlgebraError> {
    if u.is_empty() || w.is_empty() {
        return Err(AlgebraError::EmptyWord);
    }
    Ok(is_rotation(primitive_root(u), primitive_root(w)))
}
