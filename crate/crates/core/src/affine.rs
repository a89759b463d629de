//! Affine rungs `E_0`, `F_0` through the evaluation representation, the
//! `z`-grading, rotation, and annular evaluation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::braiding::{t_block, Sign};
use crate::coeffring::{qfact, Generator, RingElem};
use crate::ladder::{
    eval_linear_layers, rotate_sequence, DiagramKind, EvalResult, LadderDiagram, Layer,
};
use crate::repcore::{operator_on_degree, BlockOperator, Gen, OpKey, RepSpace, RepVector, SparseMatrix};
use crate::weights::{GlSequence, Object, RungKind};
use crate::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EvalParams {
    /// `a` stays a formal unit.
    #[default]
    Generic,
    /// `a = -q^{n+1}`.
    Filled,
}

/// The value substituted for `a` in filled mode.
pub fn filled_a(n: u32) -> RingElem {
    -RingElem::q_pow(n as i32 + 1)
}

/// Applies the parameter choice to a generic result.
pub fn specialize_params(x: &RingElem, n: u32, params: EvalParams) -> Result<RingElem, Error> {
    match params {
        EvalParams::Generic => Ok(x.clone()),
        EvalParams::Filled => {
            let mut m = BTreeMap::new();
            m.insert(Generator::A, filled_a(n));
            x.specialize(&m)
        }
    }
}

/// Chains block matrices of braidings and rungs, tracking the running block.
struct Chain<'a> {
    space: &'a RepSpace,
    cur: GlSequence,
    mat: SparseMatrix,
    zero: bool,
}

impl<'a> Chain<'a> {
    fn new(space: &'a RepSpace, seq: &GlSequence) -> Result<Self, Error> {
        Ok(Chain { space, cur: seq.clone(), mat: SparseMatrix::identity(space.dim(seq)?), zero: false })
    }

    fn push(&mut self, blk: Arc<(Object, SparseMatrix)>) {
        match &blk.0 {
            Object::Zero => self.zero = true,
            Object::Seq(t) => {
                self.mat = blk.1.mul(&self.mat);
                self.cur = t.clone();
            }
        }
    }

    fn t(&mut self, i: usize, s: Sign) -> Result<(), Error> {
        if !self.zero {
            self.push(t_block(self.space, &self.cur, i, s)?);
        }
        Ok(())
    }

    fn rung(&mut self, kind: RungKind, i: usize, k: u32) -> Result<(), Error> {
        if !self.zero {
            self.push(self.space.divided_block(&self.cur, kind, i, k)?);
        }
        Ok(())
    }
}

/// Block of `E_0^{(k)}` (`e = true`) or `F_0^{(k)}` with generic `a`.
pub fn affine_block(space: &RepSpace, seq: &GlSequence, e: bool, k: u32) -> Result<Arc<(Object, SparseMatrix)>, Error> {
    space.check(seq)?;
    if space.m < 2 {
        return Err(Error::InvalidPosition(0));
    }
    space.cached(seq, OpKey::Affine(e, k), || {
        if k == 0 {
            return Ok((Object::Seq(seq.clone()), SparseMatrix::identity(space.dim(seq)?)));
        }
        if k > 1 {
            let mut cur = seq.clone();
            let mut mat = SparseMatrix::identity(space.dim(seq)?);
            for _ in 0..k {
                let blk = affine_block(space, &cur, e, 1)?;
                let Object::Seq(t) = &blk.0 else {
                    return Ok((Object::Zero, SparseMatrix::zero(0, space.dim(seq)?)));
                };
                mat = blk.1.mul(&mat);
                cur = t.clone();
            }
            let f = qfact(k);
            return Ok((Object::Seq(cur), mat.try_map(|x| x.exact_div(&f))?));
        }
        let m = space.m;
        let mut ch = Chain::new(space, seq)?;
        for i in (2..m).rev() {
            ch.t(i, Sign::Neg)?;
        }
        ch.rung(if e { RungKind::F } else { RungKind::E }, 1, 1)?;
        for i in 2..m {
            ch.t(i, Sign::Pos)?;
        }
        if ch.zero {
            return Ok((Object::Zero, SparseMatrix::zero(0, space.dim(seq)?)));
        }
        let s = seq.a(1) + seq.a(m);
        let c = if e {
            &RingElem::a_pow(1) * &RingElem::q_pow(-s)
        } else {
            &RingElem::a_pow(-1) * &RingElem::q_pow(s)
        };
        Ok((Object::Seq(ch.cur), ch.mat.scale(&c)))
    })
}

fn affine_apply(space: &RepSpace, e: bool, k: u32, v: &RepVector, params: EvalParams) -> Result<RepVector, Error> {
    let n = space.n;
    space.apply_blockwise(v, |seq| {
        let blk = affine_block(space, seq, e, k)?;
        match &blk.0 {
            Object::Zero => Ok(None),
            Object::Seq(t) => Ok(Some((t.clone(), blk.1.try_map(|x| specialize_params(x, n, params))?))),
        }
    })
}

pub fn e0_apply(space: &RepSpace, v: &RepVector, params: EvalParams) -> Result<RepVector, Error> {
    affine_apply(space, true, 1, v, params)
}

pub fn f0_apply(space: &RepSpace, v: &RepVector, params: EvalParams) -> Result<RepVector, Error> {
    affine_apply(space, false, 1, v, params)
}

/// `#E_0 - #F_0`, each divided power counted with its multiplicity. Layers
/// after a rotation are counted in the source frame, where they act.
pub fn z_degree(d: &LadderDiagram) -> i32 {
    let mut frame = 0i32;
    let mut deg = 0i32;
    for l in &d.layers {
        if let Layer::Rot(dir) = *l {
            frame += dir as i32;
            continue;
        }
        deg += match rotate_layer(l, d.m, -frame) {
            Ok(Layer::RungE0(k)) => k as i32,
            Ok(Layer::RungF0(k)) => -(k as i32),
            _ => 0,
        };
    }
    deg
}

/// Re-indexes one layer for a rotation by `dir` (`±1`, possibly repeated).
pub fn rotate_layer(l: &Layer, m: usize, dir: i32) -> Result<Layer, Error> {
    let shift = |p: usize| -> usize { (p as i64 + dir as i64).rem_euclid(m as i64) as usize };
    let rung = |e: bool, p: usize, k: u32| match (e, shift(p)) {
        (true, 0) => Layer::RungE0(k),
        (false, 0) => Layer::RungF0(k),
        (true, q) => Layer::RungE(q, k),
        (false, q) => Layer::RungF(q, k),
    };
    Ok(match *l {
        Layer::RungE(i, k) => rung(true, i, k),
        Layer::RungF(i, k) => rung(false, i, k),
        Layer::RungE0(k) => rung(true, 0, k),
        Layer::RungF0(k) => rung(false, 0, k),
        Layer::Crossing(i, s) => match shift(i) {
            0 => return Err(Error::WrapCrossing),
            q => Layer::Crossing(q, s),
        },
        Layer::Twist(u, h) => Layer::Twist(shift(u - 1) + 1, h),
        Layer::Rot(d) => Layer::Rot(d),
    })
}

/// Rotates the whole annulus: upright `j` becomes upright `j + dir`.
pub fn rotate_diagram(d: &LadderDiagram, dir: i8) -> Result<LadderDiagram, Error> {
    if dir != 1 && dir != -1 {
        return Err(Error::Precondition(format!("rotation by {}", dir)));
    }
    let layers = d.layers.iter().map(|l| rotate_layer(l, d.m, dir as i32)).collect::<Result<Vec<_>, _>>()?;
    Ok(LadderDiagram {
        kind: DiagramKind::Annular,
        source: rotate_sequence(&d.source, dir),
        layers,
        ..d.clone()
    })
}

/// Evaluates an annular diagram. Rotation layers only relabel: later layers
/// are mapped back to the source frame and the output block is relabelled.
pub fn annular_eval_in(space: &RepSpace, d: &LadderDiagram, params: EvalParams) -> Result<EvalResult, Error> {
    d.validate()?;
    if space.n != d.n || space.m != d.m {
        return Err(Error::Precondition(format!("diagram needs n={} m={}", d.n, d.m)));
    }
    let zpow = RingElem::z_pow(z_degree(d));
    let finish = |x: &RingElem| -> Result<RingElem, Error> { Ok(&specialize_params(x, d.n, params)? * &zpow) };
    let Some((tgt, mat, frame)) = eval_annular_layers(space, &d.source, &d.layers)? else {
        if d.source.is_extremal() {
            return Ok(EvalResult::Scalar(RingElem::zero()));
        }
        return Ok(EvalResult::Operator(BlockOperator::zero()));
    };
    let mat = mat.try_map(finish)?;
    let (out_tgt, mat) = relabel(space, &tgt, &mat, frame)?;
    if d.source.is_extremal() && out_tgt.is_extremal() {
        return Ok(EvalResult::Scalar(mat.entry(0, 0)));
    }
    Ok(EvalResult::Operator(BlockOperator::single(d.source.clone(), out_tgt, mat)))
}

pub fn annular_eval(d: &LadderDiagram, params: EvalParams) -> Result<EvalResult, Error> {
    annular_eval_in(&RepSpace::new(d.n, d.m)?, d, params)
}

/// Scalar of a closed annular diagram.
pub fn annular_closed(space: &RepSpace, d: &LadderDiagram, params: EvalParams) -> Result<RingElem, Error> {
    match annular_eval_in(space, d, params)? {
        EvalResult::Scalar(x) => Ok(x),
        EvalResult::Operator(_) => Err(Error::NotClosed),
    }
}

type AnnularOut = Option<(GlSequence, SparseMatrix, i32)>;

fn eval_annular_layers(space: &RepSpace, source: &GlSequence, layers: &[Layer]) -> Result<AnnularOut, Error> {
    if !source.is_admissible() {
        return Ok(None);
    }
    let mut frame = 0i32;
    let mut cur = source.clone();
    let mut mat = SparseMatrix::identity(space.dim(source)?);
    for l in layers {
        if let Layer::Rot(dir) = *l {
            frame += dir as i32;
            continue;
        }
        let l = rotate_layer(l, space.m, -frame)?;
        let blk = match l {
            Layer::RungE0(k) => affine_block(space, &cur, true, k)?,
            Layer::RungF0(k) => affine_block(space, &cur, false, k)?,
            _ => match eval_linear_layers(space, &cur, &[l])? {
                None => return Ok(None),
                Some((t, m1)) => Arc::new((Object::Seq(t), m1)),
            },
        };
        match &blk.0 {
            Object::Zero => return Ok(None),
            Object::Seq(t) => {
                mat = blk.1.mul(&mat);
                cur = t.clone();
            }
        }
    }
    Ok(Some((cur, mat, frame)))
}

/// Renames the target block after a net rotation by `frame`, carrying each
/// monomial to the one with rotated columns.
fn relabel(space: &RepSpace, tgt: &GlSequence, mat: &SparseMatrix, frame: i32) -> Result<(GlSequence, SparseMatrix), Error> {
    let m = space.m;
    let f = frame.rem_euclid(m as i32) as usize;
    if f == 0 {
        return Ok((tgt.clone(), mat.clone()));
    }
    let mut e = tgt.entries.clone();
    e.rotate_right(f);
    let new_tgt = GlSequence::new(tgt.n, e);
    let old_b = space.weight_space_basis(tgt)?;
    let new_b = space.weight_space_basis(&new_tgt)?;
    let perm: Vec<usize> = old_b
        .monomials
        .iter()
        .map(|mono| {
            let vars = mono.vars(m);
            let mut mask = 0u64;
            for v in vars {
                let col = (v.col as usize - 1 + f) % m;
                mask |= 1u64 << ((v.row as usize - 1) * m + col);
            }
            new_b.position(crate::repcore::Monomial(mask)).expect("rotation preserves profiles")
        })
        .collect();
    let cols = (0..mat.cols)
        .map(|c| mat.column(c).iter().map(|(r, x)| (perm[*r], x.clone())).collect())
        .collect();
    Ok((new_tgt, SparseMatrix::from_columns(mat.rows, cols)))
}

/// `E_0` (or `F_0`) summed over all blocks of degree `total`, generic `a`.
pub fn affine_operator(space: &RepSpace, e: bool, k: u32, total: i32) -> Result<BlockOperator, Error> {
    let mut out = BlockOperator::zero();
    for s in space.blocks_of_degree(total) {
        let blk = affine_block(space, &s, e, k)?;
        if let Object::Seq(t) = &blk.0 {
            out.insert_add(s, t.clone(), blk.1.clone());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketReport {
    pub blocks_checked: usize,
    /// Blocks where the left- or right-nested form differs from `E_0`.
    pub failures: Vec<(GlSequence, String)>,
}

/// `[u, v]_{q^{1/2}} = q^{1/2} u v - q^{-1/2} v u`, with `u v` meaning `v` first.
fn qbracket(u: &BlockOperator, v: &BlockOperator) -> BlockOperator {
    v.then(u).scale(&RingElem::s_pow(1)).sub(&u.then(v).scale(&RingElem::s_pow(-1)))
}

/// Checks both nested `q^{1/2}`-bracket expressions of `F_1, …, F_{m-1}`
/// against `E_0` on every block of degree `total`.
pub fn bracket_form_check(m: usize, n: u32, total: i32) -> Result<BracketReport, Error> {
    if m < 3 {
        return Err(Error::Precondition(String::from("bracket form needs m >= 3")));
    }
    let space = RepSpace::new(n, m)?;
    let f: Vec<BlockOperator> = (0..m)
        .map(|i| if i == 0 { Ok(BlockOperator::zero()) } else { operator_on_degree(&space, &[Gen::F(i, 1)], total) })
        .collect::<Result<_, _>>()?;
    let mut right = f[1].clone();
    for i in 2..m {
        right = qbracket(&f[i], &right);
    }
    let mut left = f[m - 1].clone();
    for i in (1..m - 1).rev() {
        left = qbracket(&left, &f[i]);
    }
    let prefactor = |s: &GlSequence| {
        let sign = if (m - 2).is_multiple_of(2) { 1 } else { -1 };
        let e = -2 * (s.a(1) + s.a(m)) + (m as i32 - 2);
        &RingElem::a_pow(1) * &RingElem::s_pow(e).scale(crate::GaussInt::from(sign as i64))
    };
    let scale_blocks = |op: &BlockOperator| {
        let mut out = BlockOperator::zero();
        for ((s, t), mat) in &op.blocks {
            out.insert_add(s.clone(), t.clone(), mat.scale(&prefactor(s)));
        }
        out
    };
    let right = scale_blocks(&right);
    let left = scale_blocks(&left);
    let e0 = affine_operator(&space, true, 1, total)?;
    let mut failures = Vec::new();
    let blocks = space.blocks_of_degree(total);
    for s in &blocks {
        let only = |op: &BlockOperator| BlockOperator {
            blocks: op.blocks.iter().filter(|((a, _), _)| a == s).map(|(k, v)| (k.clone(), v.clone())).collect(),
        };
        let e = only(&e0);
        if only(&right) != e {
            failures.push((s.clone(), String::from("right-nested")));
        }
        if only(&left) != e {
            failures.push((s.clone(), String::from("left-nested")));
        }
    }
    Ok(BracketReport { blocks_checked: blocks.len(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::Layer::*;
    use crate::qint;

    #[test]
    fn m2_e0_is_scaled_f1() {
        let sp = RepSpace::new(2, 2).unwrap();
        let s = GlSequence::new(2, alloc::vec![1, 1]);
        let e0 = affine_block(&sp, &s, true, 1).unwrap();
        let f1 = sp.divided_block(&s, RungKind::F, 1, 1).unwrap();
        assert_eq!(e0.0, f1.0);
        assert_eq!(e0.1, f1.1.scale(&(&RingElem::a_pow(1) * &RingElem::q_pow(-2))));
        let top = GlSequence::new(2, alloc::vec![2, 0]);
        assert!(affine_block(&sp, &top, true, 1).unwrap().0.is_zero());
    }

    #[test]
    fn annular_square() {
        let d = LadderDiagram::annular(2, alloc::vec![0, 2], alloc::vec![RungE0(1), RungF(1, 1), RungF0(1), RungE(1, 1)]);
        let sq = &qint(2) * &qint(2);
        assert_eq!(annular_eval(&d, EvalParams::Generic).unwrap(), EvalResult::Scalar(sq.clone()));
        assert_eq!(annular_eval(&d, EvalParams::Filled).unwrap(), EvalResult::Scalar(sq));
        assert_eq!(z_degree(&d), 0);
        let empty = LadderDiagram::annular(2, alloc::vec![1, 1], alloc::vec![]);
        let EvalResult::Operator(op) = annular_eval(&empty, EvalParams::Generic).unwrap() else { panic!() };
        assert_eq!(op, RepSpace::new(2, 2).unwrap().identity(&empty.source).unwrap());
    }

    #[test]
    fn z_degrees() {
        let d = LadderDiagram::annular(2, alloc::vec![1, 1], alloc::vec![RungE0(1)]);
        assert_eq!(z_degree(&d), 1);
        let d = LadderDiagram::annular(2, alloc::vec![0, 2], alloc::vec![RungE0(2)]);
        assert_eq!(z_degree(&d), 2);
    }

    #[test]
    fn rotation_reindexes() {
        let d = LadderDiagram::annular(2, alloc::vec![1, 1, 0], alloc::vec![RungE(1, 1), RungE(2, 1)]);
        let r = rotate_diagram(&d, 1).unwrap();
        assert_eq!(r.source.entries, alloc::vec![0, 1, 1]);
        assert_eq!(r.layers, alloc::vec![RungE(2, 1), RungE0(1)]);
        assert_eq!(rotate_diagram(&r, -1).unwrap(), d);
        let x = LadderDiagram::annular(2, alloc::vec![1, 1, 0], alloc::vec![Crossing(2, Sign::Pos)]);
        assert_eq!(rotate_diagram(&x, 1), Err(Error::WrapCrossing));
    }

    #[test]
    fn bracket_precondition() {
        assert!(bracket_form_check(2, 2, 2).is_err());
        let r = bracket_form_check(3, 2, 2).unwrap();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
    }
}
