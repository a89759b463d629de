//! Lusztig's quantum Weyl group operators, the rescaled braiding `T_i`, and
//! the expansion of a crossing into rung words.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeffring::RingElem;
use crate::repcore::{rung_word_block, OpKey, RepSpace, RepVector, SparseMatrix};
use crate::weights::{swap_adjacent, GlSequence, Object, RungKind};
use crate::Error;

use RungKind::{E, F};

/// Crossing sign. `Pos` has the left strand passing over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// One term `coeff · X^{(a)} Y^{(b)} X^{(c)}` of a crossing expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothingTerm {
    pub abc: (u32, u32, u32),
    pub coeff: RingElem,
    /// `Pos` terms are `E F E`-shaped, `Neg` terms `F E F`-shaped.
    pub sign: Sign,
}

impl SmoothingTerm {
    /// The rungs at position `i` in application order (bottom rung first).
    pub fn rungs(&self, i: usize) -> [(RungKind, usize, u32); 3] {
        let (a, b, c) = self.abc;
        match self.sign {
            Sign::Pos => [(E, i, c), (F, i, b), (E, i, a)],
            Sign::Neg => [(F, i, c), (E, i, b), (F, i, a)],
        }
    }
}

/// `Σ coeff · X^{(a)} Y^{(b)} X^{(c)}` over `0 ≤ a, c ≤ n` with `a - b + c = d`
/// and `b ≥ 0`, where `X, Y` are `E, F` (`efe`) or `F, E`.
fn sum_block(
    space: &RepSpace,
    seq: &GlSequence,
    i: usize,
    efe: bool,
    d: i32,
    coeff: impl Fn(i32, i32, i32) -> RingElem,
) -> Result<(GlSequence, SparseMatrix), Error> {
    let n = space.n as i32;
    let (x, y) = if efe { (E, F) } else { (F, E) };
    let tgt = swap_adjacent(seq, i);
    let mut acc = SparseMatrix::zero(space.dim(&tgt)?, space.dim(seq)?);
    for a in 0..=n {
        for c in 0..=n {
            let b = a + c - d;
            if b < 0 {
                continue;
            }
            let items = [(x, i, c as u32), (y, i, b as u32), (x, i, a as u32)];
            if let Some((t, mat)) = rung_word_block(space, seq, &items)? {
                debug_assert_eq!(t, tgt);
                acc = acc.add(&mat.scale(&coeff(a, b, c)));
            }
        }
    }
    Ok((tgt, acc))
}

fn check_pos(space: &RepSpace, seq: &GlSequence, i: usize) -> Result<(), Error> {
    space.check(seq)?;
    if i == 0 || i >= space.m {
        return Err(Error::InvalidPosition(i));
    }
    Ok(())
}

/// `T''_i` (`Pos`) or its inverse (`Neg`) on the block `seq`; the target is
/// `seq` with entries `i, i+1` swapped.
pub fn tpp_block(space: &RepSpace, seq: &GlSequence, i: usize, sign: Sign) -> Result<Arc<(Object, SparseMatrix)>, Error> {
    check_pos(space, seq, i)?;
    space.cached(seq, OpKey::Tpp(i, sign.as_i8()), || {
        let lam = seq.lambda(i);
        let (t, m) = match sign {
            Sign::Pos => sum_block(space, seq, i, true, -lam, |a, b, c| RingElem::signed_q_pow(b as i64, -a * c + b))?,
            // (T''_i)^{-1} is T'_i with q inverted.
            Sign::Neg => sum_block(space, seq, i, false, lam, |a, b, c| RingElem::signed_q_pow(b as i64, a * c - b))?,
        };
        Ok((Object::Seq(t), m))
    })
}

/// `T'_i` (`Pos`) or its inverse (`Neg`) on the block `seq`.
pub fn tp_block(space: &RepSpace, seq: &GlSequence, i: usize, sign: Sign) -> Result<Arc<(Object, SparseMatrix)>, Error> {
    check_pos(space, seq, i)?;
    space.cached(seq, OpKey::Tp(i, sign.as_i8()), || {
        let lam = seq.lambda(i);
        let (t, m) = match sign {
            Sign::Pos => sum_block(space, seq, i, false, lam, |a, b, c| RingElem::signed_q_pow(b as i64, -a * c + b))?,
            Sign::Neg => sum_block(space, seq, i, true, -lam, |a, b, c| RingElem::signed_q_pow(b as i64, a * c - b))?,
        };
        Ok((Object::Seq(t), m))
    })
}

/// The rescaled braiding `T_i^{±1}` on the block `seq`.
pub fn t_block(space: &RepSpace, seq: &GlSequence, i: usize, sign: Sign) -> Result<Arc<(Object, SparseMatrix)>, Error> {
    check_pos(space, seq, i)?;
    space.cached(seq, OpKey::T(i, sign.as_i8()), || {
        let base = tpp_block(space, seq, i, sign)?;
        let scale = match sign {
            Sign::Pos => {
                let l = seq.a(i + 1);
                RingElem::signed_q_pow(l as i64, -l)
            }
            Sign::Neg => {
                let k = seq.a(i);
                RingElem::signed_q_pow(k as i64, k)
            }
        };
        Ok((base.0.clone(), base.1.scale(&scale)))
    })
}

fn blockwise(
    space: &RepSpace,
    v: &RepVector,
    f: impl Fn(&GlSequence) -> Result<Arc<(Object, SparseMatrix)>, Error>,
) -> Result<RepVector, Error> {
    space.apply_blockwise(v, |seq| {
        let blk = f(seq)?;
        Ok(blk.0.seq().map(|t| (t.clone(), blk.1.clone())))
    })
}

pub fn tpp_apply(space: &RepSpace, i: usize, sign: Sign, v: &RepVector) -> Result<RepVector, Error> {
    blockwise(space, v, |s| tpp_block(space, s, i, sign))
}

pub fn tp_apply(space: &RepSpace, i: usize, sign: Sign, v: &RepVector) -> Result<RepVector, Error> {
    blockwise(space, v, |s| tp_block(space, s, i, sign))
}

pub fn t_apply(space: &RepSpace, i: usize, sign: Sign, v: &RepVector) -> Result<RepVector, Error> {
    blockwise(space, v, |s| t_block(space, s, i, sign))
}

/// The full term list expanding a crossing of a `k`-strand (left) and an
/// `l`-strand (right), with `0 ≤ a, b, c ≤ n`. Terms that vanish on every
/// block are kept.
pub fn smooth_crossing(n: u32, k: u32, l: u32, sign: Sign) -> Vec<SmoothingTerm> {
    let (k, l, n) = (k as i32, l as i32, n as i32);
    let mut out = vec![];
    for a in 0..=n {
        for c in 0..=n {
            let b = match sign {
                Sign::Pos => a + c - (k - l),
                Sign::Neg => a + c - (l - k),
            };
            if !(0..=n).contains(&b) {
                continue;
            }
            let coeff = match sign {
                Sign::Pos => RingElem::signed_q_pow((b - l) as i64, -a * c + b - l),
                Sign::Neg => RingElem::signed_q_pow((b + k) as i64, a * c - b + k),
            };
            out.push(SmoothingTerm { abc: (a as u32, b as u32, c as u32), coeff, sign });
        }
    }
    out
}
