//! gl_m sequences, sl_m weights and the lift between them.

use alloc::vec::Vec;
use core::fmt;

use crate::Error;

/// An m-tuple `(a_1, …, a_m)` labelling a weight block of `Λ^N(C^n ⊗ C^m)`.
///
/// Entries outside `0..=n` are representable; such sequences stand for the
/// zero object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlSequence {
    pub n: u32,
    pub entries: Vec<i32>,
}

/// A ladder object: either a weight block or the zero object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Object {
    Seq(GlSequence),
    Zero,
}

impl Object {
    pub fn seq(&self) -> Option<&GlSequence> {
        match self {
            Object::Seq(s) => Some(s),
            Object::Zero => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Object::Zero)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RungKind {
    E,
    F,
}

impl RungKind {
    pub fn opposite(self) -> Self {
        match self {
            RungKind::E => RungKind::F,
            RungKind::F => RungKind::E,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlWeight {
    pub coords: Vec<i32>,
}

/// Affine weight `(λ_0, …, λ_{m-1})` with `λ_0 = a_1 - a_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineWeight {
    pub coords: Vec<i32>,
}

impl GlSequence {
    pub fn new(n: u32, entries: Vec<i32>) -> Self {
        GlSequence { n, entries }
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    /// `N = Σ a_i`.
    pub fn total(&self) -> i32 {
        self.entries.iter().sum()
    }

    pub fn is_admissible(&self) -> bool {
        self.entries.iter().all(|&a| 0 <= a && a <= self.n as i32)
    }

    /// `a_i` with 1-based `i`.
    pub fn a(&self, i: usize) -> i32 {
        self.entries[i - 1]
    }

    /// `λ_i = a_{i+1} - a_i` for `1 ≤ i ≤ m-1`.
    pub fn lambda(&self, i: usize) -> i32 {
        self.entries[i] - self.entries[i - 1]
    }

    /// True when every entry is `0` or `n`, so the block is one-dimensional.
    pub fn is_extremal(&self) -> bool {
        self.entries.iter().all(|&a| a == 0 || a == self.n as i32)
    }

    pub fn into_object(self) -> Object {
        if self.is_admissible() {
            Object::Seq(self)
        } else {
            Object::Zero
        }
    }

    pub fn affine_weight(&self) -> AffineWeight {
        let m = self.m();
        let mut coords = Vec::with_capacity(m);
        coords.push(self.entries[0] - self.entries[m - 1]);
        for i in 1..m {
            coords.push(self.lambda(i));
        }
        AffineWeight { coords }
    }
}

impl fmt::Display for GlSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", a)?;
        }
        f.write_str(")")
    }
}

pub fn weight_of(seq: &GlSequence) -> Result<SlWeight, Error> {
    if !seq.is_admissible() {
        return Err(Error::InadmissibleSequence);
    }
    Ok(SlWeight { coords: (1..seq.m()).map(|i| seq.lambda(i)).collect() })
}

/// The unique sequence with consecutive differences `w` and sum `total`, or
/// the zero object when none is integral and admissible.
pub fn phi_lift(w: &SlWeight, n: u32, total: i32) -> Object {
    // a_j = a_1 + c_j with c_j the partial sums of w, so m·a_1 = N - Σ c_j.
    let mut partial = Vec::with_capacity(w.coords.len() + 1);
    partial.push(0i64);
    for &l in &w.coords {
        let last = *partial.last().unwrap();
        partial.push(last + l as i64);
    }
    let m = partial.len() as i64;
    let rest = total as i64 - partial.iter().sum::<i64>();
    if rest.rem_euclid(m) != 0 {
        return Object::Zero;
    }
    let a1 = rest / m;
    let entries: Vec<i32> = partial.iter().map(|c| (a1 + c) as i32).collect();
    GlSequence::new(n, entries).into_object()
}

/// Target of `E_i^{(k)}` or `F_i^{(k)}` applied at position `1 ≤ i ≤ m-1`.
pub fn rung_target(seq: &GlSequence, kind: RungKind, i: usize, k: i32) -> Object {
    let mut e = seq.entries.clone();
    let d = match kind {
        RungKind::E => -k,
        RungKind::F => k,
    };
    e[i - 1] += d;
    e[i] -= d;
    GlSequence::new(seq.n, e).into_object()
}

pub fn swap_adjacent(seq: &GlSequence, i: usize) -> GlSequence {
    let mut e = seq.entries.clone();
    e.swap(i - 1, i);
    GlSequence::new(seq.n, e)
}

/// Simple reflection `s_i` on an sl_m weight.
pub fn reflect(w: &SlWeight, i: usize) -> SlWeight {
    let mut c = w.coords.clone();
    let li = c[i - 1];
    c[i - 1] = -li;
    if i >= 2 {
        c[i - 2] += li;
    }
    if i < c.len() {
        c[i] += li;
    }
    SlWeight { coords: c }
}

/// Every admissible sequence of length `m` with entries in `0..=n` summing to
/// `total`, in lexicographic order.
pub fn all_sequences(n: u32, m: usize, total: i32) -> Vec<GlSequence> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fill(n as i32, m, total, &mut cur, &mut out);
    out.into_iter().map(|e| GlSequence::new(n, e)).collect()
}

fn fill(n: i32, m: usize, rest: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
    if cur.len() == m {
        if rest == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let slots = (m - cur.len() - 1) as i32;
    for a in 0..=n.min(rest) {
        if rest - a <= slots * n {
            cur.push(a);
            fill(n, m, rest - a, cur, out);
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn seq(n: u32, e: &[i32]) -> GlSequence {
        GlSequence::new(n, e.to_vec())
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_of(&seq(2, &[1, 1])).unwrap().coords, vec![0]);
        assert_eq!(weight_of(&seq(2, &[2, 0])).unwrap().coords, vec![-2]);
        assert_eq!(weight_of(&seq(3, &[0, 3, 0])).unwrap().coords, vec![3, -3]);
        assert_eq!(weight_of(&seq(2, &[3, -1])), Err(Error::InadmissibleSequence));
    }

    #[test]
    fn lift_examples() {
        let w = SlWeight { coords: vec![3, -3] };
        assert_eq!(phi_lift(&w, 3, 3), Object::Seq(seq(3, &[0, 3, 0])));
        assert_eq!(phi_lift(&SlWeight { coords: vec![0] }, 2, 3), Object::Zero);
        assert_eq!(phi_lift(&SlWeight { coords: vec![-2] }, 2, 2), Object::Seq(seq(2, &[2, 0])));
    }

    #[test]
    fn rung_examples() {
        assert_eq!(rung_target(&seq(2, &[1, 1]), RungKind::E, 1, 1), Object::Seq(seq(2, &[0, 2])));
        assert_eq!(rung_target(&seq(2, &[2, 0]), RungKind::F, 1, 1), Object::Zero);
        assert_eq!(rung_target(&seq(3, &[1, 2, 0]), RungKind::E, 2, 2), Object::Seq(seq(3, &[1, 0, 2])));
    }

    #[test]
    fn swap_examples() {
        assert_eq!(swap_adjacent(&seq(2, &[2, 0]), 1), seq(2, &[0, 2]));
        assert_eq!(swap_adjacent(&seq(2, &[1, 1]), 1), seq(2, &[1, 1]));
        assert_eq!(swap_adjacent(&seq(3, &[0, 3, 0]), 2), seq(3, &[0, 0, 3]));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_sequences(2, 2, 2).len(), 3);
        assert_eq!(all_sequences(3, 3, 3).len(), 10);
        assert!(all_sequences(2, 2, 5).is_empty());
        assert_eq!(seq(3, &[0, 3, 0]).affine_weight().coords, vec![0, 3, -3]);
    }
}
