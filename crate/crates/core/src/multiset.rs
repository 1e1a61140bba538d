//! Multiset helpers over vectors. Order never matters for the results.

use std::collections::BTreeMap;

pub fn counts<T: Ord + Clone>(xs: &[T]) -> BTreeMap<T, usize> {
    let mut m = BTreeMap::new();
    for x in xs {
        *m.entry(x.clone()).or_insert(0) += 1;
    }
    m
}

pub fn eq<T: Ord + Clone>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && counts(a) == counts(b)
}

pub fn count<T: PartialEq>(xs: &[T], x: &T) -> usize {
    xs.iter().filter(|y| *y == x).count()
}

pub fn union<T: Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out
}

pub fn scale<T: Clone>(a: &[T], n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() * n);
    for _ in 0..n {
        out.extend_from_slice(a);
    }
    out
}

/// `a − b`, or `None` when `b` is not contained in `a`.
pub fn sub<T: PartialEq + Clone>(a: &[T], b: &[T]) -> Option<Vec<T>> {
    let mut out = a.to_vec();
    for x in b {
        let pos = out.iter().position(|y| y == x)?;
        out.remove(pos);
    }
    Some(out)
}

/// Remove one occurrence of `x`.
pub fn remove_one<T: PartialEq + Clone>(a: &[T], x: &T) -> Option<Vec<T>> {
    sub(a, std::slice::from_ref(x))
}

pub fn contains_all<T: PartialEq + Clone>(a: &[T], b: &[T]) -> bool {
    sub(a, b).is_some()
}

/// Largest common sub-multiset.
pub fn intersection<T: PartialEq + Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let mut rest = b.to_vec();
    let mut out = Vec::new();
    for x in a {
        if let Some(pos) = rest.iter().position(|y| y == x) {
            rest.remove(pos);
            out.push(x.clone());
        }
    }
    out
}
