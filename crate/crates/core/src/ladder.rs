//! Ladder diagrams and their evaluation.
//!
//! Layers are listed bottom to top, which is also the order in which they act.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::braiding::{t_block, Sign};
use crate::coeffring::{Exp, GaussInt, RingElem};
use crate::repcore::{BlockOperator, RepSpace, SparseMatrix};
use crate::weights::{rung_target, swap_adjacent, GlSequence, Object, RungKind};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Layer {
    RungE(usize, u32),
    RungF(usize, u32),
    Crossing(usize, Sign),
    /// Half twists on the upright at a position in `1..=m`.
    Twist(usize, i32),
    /// Affine rung `E_0^{(k)}`; annular diagrams only.
    RungE0(u32),
    RungF0(u32),
    /// Rotation of the annulus by one upright; annular diagrams only.
    Rot(i8),
}

impl Layer {
    pub fn is_annular(&self) -> bool {
        matches!(self, Layer::RungE0(_) | Layer::RungF0(_) | Layer::Rot(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagramKind {
    Linear,
    Annular,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LadderDiagram {
    pub n: u32,
    pub m: usize,
    pub total: i32,
    pub kind: DiagramKind,
    pub source: GlSequence,
    pub layers: Vec<Layer>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalResult {
    Operator(BlockOperator),
    Scalar(RingElem),
}

impl LadderDiagram {
    pub fn new(n: u32, source: Vec<i32>, layers: Vec<Layer>) -> Self {
        let total = source.iter().sum();
        LadderDiagram {
            n,
            m: source.len(),
            total,
            kind: DiagramKind::Linear,
            source: GlSequence::new(n, source),
            layers,
        }
    }

    pub fn annular(n: u32, source: Vec<i32>, layers: Vec<Layer>) -> Self {
        LadderDiagram { kind: DiagramKind::Annular, ..LadderDiagram::new(n, source, layers) }
    }

    pub fn identity(seq: &GlSequence) -> Self {
        LadderDiagram::new(seq.n, seq.entries.clone(), Vec::new())
    }

    /// Checks header consistency and layer positions.
    pub fn validate(&self) -> Result<(), Error> {
        if self.source.m() != self.m || self.source.total() != self.total || self.source.n != self.n {
            return Err(Error::Precondition(format!(
                "source {} does not match n={} m={} N={}",
                self.source, self.n, self.m, self.total
            )));
        }
        for l in &self.layers {
            if self.kind == DiagramKind::Linear && l.is_annular() {
                return Err(Error::Precondition(String::from("annular layer in a linear diagram")));
            }
            match *l {
                Layer::RungE(i, _) | Layer::RungF(i, _) | Layer::Crossing(i, _) => {
                    if i == 0 || i >= self.m {
                        return Err(Error::InvalidPosition(i));
                    }
                }
                Layer::Twist(i, _) => {
                    if i == 0 || i > self.m {
                        return Err(Error::InvalidPosition(i));
                    }
                }
                Layer::Rot(d) => {
                    if d != 1 && d != -1 {
                        return Err(Error::Precondition(format!("rotation by {}", d)));
                    }
                }
                Layer::RungE0(_) | Layer::RungF0(_) => {
                    if self.m < 2 {
                        return Err(Error::InvalidPosition(0));
                    }
                }
            }
        }
        Ok(())
    }

    /// The object after each layer, starting with the source.
    pub fn running_objects(&self) -> Vec<Object> {
        let mut out = Vec::with_capacity(self.layers.len() + 1);
        let mut cur = self.source.clone().into_object();
        out.push(cur.clone());
        for l in &self.layers {
            cur = match &cur {
                Object::Zero => Object::Zero,
                Object::Seq(s) => layer_target(s, l),
            };
            out.push(cur.clone());
        }
        out
    }

    pub fn target(&self) -> Object {
        self.running_objects().pop().unwrap()
    }
}

/// Object reached by a single layer.
pub fn layer_target(s: &GlSequence, l: &Layer) -> Object {
    match *l {
        Layer::RungE(i, k) => rung_target(s, RungKind::E, i, k as i32),
        Layer::RungF(i, k) => rung_target(s, RungKind::F, i, k as i32),
        Layer::Crossing(i, _) => Object::Seq(swap_adjacent(s, i)),
        Layer::Twist(..) => Object::Seq(s.clone()),
        Layer::RungE0(k) => affine_target(s, k as i32),
        Layer::RungF0(k) => affine_target(s, -(k as i32)),
        Layer::Rot(d) => Object::Seq(rotate_sequence(s, d)),
    }
}

/// `E_0^{(k)}` adds `k` to `a_1` and removes it from `a_m`; negative `k` is `F_0`.
pub fn affine_target(s: &GlSequence, k: i32) -> Object {
    let mut e = s.entries.clone();
    let m = e.len();
    e[0] += k;
    e[m - 1] -= k;
    GlSequence::new(s.n, e).into_object()
}

/// Rotation by `+1` moves upright `m` to the front.
pub fn rotate_sequence(s: &GlSequence, d: i8) -> GlSequence {
    let mut e = s.entries.clone();
    if d > 0 {
        e.rotate_right(1);
    } else {
        e.rotate_left(1);
    }
    GlSequence::new(s.n, e)
}

/// Half-twist monomial `i^k s^{-nk+k(k-1)}` raised to the `half_twists` power.
/// Two half twists give `t_k = (-1)^k q^{-kn+k(k-1)}`.
pub fn twist_coefficient(k: i32, n: u32, half_twists: i32) -> RingElem {
    let n = n as i32;
    let e = half_twists * (-n * k + k * (k - 1));
    RingElem::monomial(GaussInt::i_pow(k as i64 * half_twists as i64), Exp::new(e, 0, 0))
}

/// `t_k`, the value of one positive full twist on a `k`-strand.
pub fn full_twist(k: i32, n: u32) -> RingElem {
    twist_coefficient(k, n, 2)
}

/// Evaluates a crossing-and-rung layer list on a single block. Returns the
/// target and matrix, or `None` for the zero morphism.
pub(crate) fn eval_linear_layers(
    space: &RepSpace,
    source: &GlSequence,
    layers: &[Layer],
) -> Result<Option<(GlSequence, SparseMatrix)>, Error> {
    if !source.is_admissible() {
        return Ok(None);
    }
    let mut cur = source.clone();
    let mut mat = SparseMatrix::identity(space.dim(source)?);
    for l in layers {
        let blk = match *l {
            Layer::RungE(i, k) => space.divided_block(&cur, RungKind::E, i, k)?,
            Layer::RungF(i, k) => space.divided_block(&cur, RungKind::F, i, k)?,
            Layer::Crossing(i, s) => t_block(space, &cur, i, s)?,
            Layer::Twist(i, h) => {
                if i == 0 || i > space.m {
                    return Err(Error::InvalidPosition(i));
                }
                mat = mat.scale(&twist_coefficient(cur.a(i), space.n, h));
                continue;
            }
            _ => return Err(Error::Precondition(String::from("annular layer in a linear evaluation"))),
        };
        match &blk.0 {
            Object::Zero => return Ok(None),
            Object::Seq(t) => {
                mat = blk.1.mul(&mat);
                cur = t.clone();
            }
        }
    }
    Ok(Some((cur, mat)))
}

fn check_space(space: &RepSpace, d: &LadderDiagram) -> Result<(), Error> {
    d.validate()?;
    if space.n != d.n || space.m != d.m {
        return Err(Error::Precondition(format!("diagram needs n={} m={}", d.n, d.m)));
    }
    Ok(())
}

/// Matrix of a linear diagram in a given space.
pub fn eval_matrix_in(space: &RepSpace, d: &LadderDiagram) -> Result<BlockOperator, Error> {
    check_space(space, d)?;
    Ok(match eval_linear_layers(space, &d.source, &d.layers)? {
        None => BlockOperator::zero(),
        Some((t, mat)) => BlockOperator::single(d.source.clone(), t, mat),
    })
}

pub fn eval_matrix(d: &LadderDiagram) -> Result<BlockOperator, Error> {
    eval_matrix_in(&RepSpace::new(d.n, d.m)?, d)
}

/// Scalar value of a diagram whose boundary entries are all `0` or `n`.
pub fn eval_closed_in(space: &RepSpace, d: &LadderDiagram) -> Result<RingElem, Error> {
    check_space(space, d)?;
    let closed = |o: &Object| o.seq().is_none_or(|s| s.is_extremal());
    if !d.source.is_extremal() || !closed(&d.target()) {
        return Err(Error::NotClosed);
    }
    let op = eval_matrix_in(space, d)?;
    op.scalar().ok_or(Error::NotClosed)
}

pub fn eval_closed(d: &LadderDiagram) -> Result<RingElem, Error> {
    eval_closed_in(&RepSpace::new(d.n, d.m)?, d)
}

pub fn evaluate_in(space: &RepSpace, d: &LadderDiagram) -> Result<EvalResult, Error> {
    match eval_closed_in(space, d) {
        Ok(x) => Ok(EvalResult::Scalar(x)),
        Err(Error::NotClosed) => Ok(EvalResult::Operator(eval_matrix_in(space, d)?)),
        Err(e) => Err(e),
    }
}

/// Stacks `d2` on top of `d1`.
pub fn compose(d1: &LadderDiagram, d2: &LadderDiagram) -> Result<LadderDiagram, Error> {
    let t = d1.target();
    let ok = match &t {
        Object::Seq(s) => *s == d2.source,
        Object::Zero => false,
    };
    if !ok || d1.n != d2.n {
        let shown = match &t {
            Object::Seq(s) => format!("{}", s),
            Object::Zero => String::from("zero"),
        };
        return Err(Error::BoundaryMismatch(format!("target {} vs source {}", shown, d2.source)));
    }
    let mut out = d1.clone();
    out.layers.extend(d2.layers.iter().copied());
    if d2.kind == DiagramKind::Annular {
        out.kind = DiagramKind::Annular;
    }
    Ok(out)
}

/// The closure of a braid on `strands` strands, each colored `c`, as a closed
/// ladder on `2·strands` uprights.
///
/// Strand `j` starts at a cup on uprights `2j-1, 2j`; its upward half is
/// carried to upright `j` passing under the return halves, so the return
/// halves lie above everything and the diagram is regular isotopic to the
/// usual closure.
pub fn braid_closure(n: u32, c: u32, strands: usize, braid: &[(usize, Sign)]) -> Result<LadderDiagram, Error> {
    if strands == 0 || c > n {
        return Err(Error::InvalidBraidWord(format!("{} strands of color {} for n={}", strands, c, n)));
    }
    for &(p, _) in braid {
        if p == 0 || p >= strands {
            return Err(Error::InvalidBraidWord(format!("generator {} on {} strands", p, strands)));
        }
    }
    let m = 2 * strands;
    let mut source = vec![0i32; m];
    for j in 0..strands {
        source[2 * j] = n as i32;
    }
    let mut transport = Vec::new();
    for j in 2..=strands {
        for p in (j..=2 * j - 2).rev() {
            transport.push(p);
        }
    }
    let mut layers = Vec::new();
    for j in 0..strands {
        layers.push(Layer::RungE(2 * j + 1, n - c));
    }
    layers.extend(transport.iter().map(|&p| Layer::Crossing(p, Sign::Pos)));
    layers.extend(braid.iter().map(|&(p, s)| Layer::Crossing(p, s)));
    layers.extend(transport.iter().rev().map(|&p| Layer::Crossing(p, Sign::Neg)));
    for j in 0..strands {
        layers.push(Layer::RungF(2 * j + 1, n - c));
    }
    Ok(LadderDiagram::new(n, source, layers))
}

/// A closed unknot of color `k` with `framing` full twists.
pub fn unknot(n: u32, k: u32, framing: i32) -> LadderDiagram {
    let mut layers = vec![Layer::RungE(1, n - k)];
    if framing != 0 {
        layers.push(Layer::Twist(1, 2 * framing));
    }
    layers.push(Layer::RungF(1, n - k));
    LadderDiagram::new(n, vec![n as i32, 0], layers)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    R1(Sign),
    R2(Sign),
    R3(Sign),
    /// A rung `E_i^{(k)}` slid through a strand crossing under it.
    VertexSlide(u32),
    /// Split vertex `k -> (r, l)` followed by a crossing of its outputs.
    VertexTwist(u32),
}

/// Position-dependent data for a local move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveContext {
    pub seq: GlSequence,
    pub pos: usize,
}

/// Two diagrams and `c` with `eval(first) = c · eval(second)`.
pub fn reidemeister_pair(mv: Move, ctx: &MoveContext) -> Result<(LadderDiagram, LadderDiagram, RingElem), Error> {
    let s = &ctx.seq;
    let i = ctx.pos;
    let n = s.n;
    let bad = |why: &str| Error::InvalidContext(format!("{} at position {} of {}", why, i, s));
    if !s.is_admissible() {
        return Err(bad("inadmissible sequence"));
    }
    if i == 0 || i >= s.m() {
        return Err(bad("position out of range"));
    }
    let d = |layers: Vec<Layer>| LadderDiagram::new(n, s.entries.clone(), layers);
    let x = Layer::Crossing;
    Ok(match mv {
        Move::R2(sign) => (d(vec![x(i, sign), x(i, sign.flip())]), d(vec![]), RingElem::one()),
        Move::R3(sign) => {
            if i + 1 >= s.m() {
                return Err(bad("R3 needs three uprights"));
            }
            (
                d(vec![x(i, sign), x(i + 1, sign), x(i, sign)]),
                d(vec![x(i + 1, sign), x(i, sign), x(i + 1, sign)]),
                RingElem::one(),
            )
        }
        Move::R1(sign) => {
            if i + 2 > s.m() || s.a(i + 1) != 0 || s.a(i + 2) != n as i32 {
                return Err(bad("R1 needs (k, 0, n)"));
            }
            let k = s.a(i) as u32;
            let kink = vec![Layer::RungF(i + 1, k), x(i, sign), Layer::RungE(i + 1, k)];
            let h = match sign {
                Sign::Pos => 2,
                Sign::Neg => -2,
            };
            (d(kink), d(vec![]), twist_coefficient(k as i32, n, h))
        }
        Move::VertexSlide(k) => {
            if i + 1 >= s.m() || (k as i32) > s.a(i) || s.a(i + 1) + k as i32 > n as i32 {
                return Err(bad("slide needs room for the rung"));
            }
            (
                d(vec![Layer::RungE(i, k), x(i + 1, Sign::Pos), x(i, Sign::Pos)]),
                d(vec![x(i + 1, Sign::Pos), x(i, Sign::Pos), Layer::RungE(i + 1, k)]),
                RingElem::one(),
            )
        }
        Move::VertexTwist(r) => {
            let k = s.a(i);
            if s.a(i + 1) != 0 || r as i32 > k {
                return Err(bad("vertex twist needs (k, 0) with r <= k"));
            }
            let l = k - r as i32;
            let c = &twist_coefficient(k, n, 1)
                * &(&twist_coefficient(r as i32, n, -1) * &twist_coefficient(l, n, -1));
            (d(vec![Layer::RungE(i, r), x(i, Sign::Pos)]), d(vec![Layer::RungE(i, l as u32)]), c)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{qbinom, qint};

    #[test]
    fn circle_and_theta() {
        let circle = LadderDiagram::new(2, vec![2, 0], vec![Layer::RungE(1, 1), Layer::RungF(1, 1)]);
        assert_eq!(eval_closed(&circle).unwrap(), qint(2));
        let theta = LadderDiagram::new(
            3,
            vec![0, 3, 0],
            vec![Layer::RungF(1, 1), Layer::RungE(2, 1), Layer::RungF(2, 1), Layer::RungE(1, 1)],
        );
        assert_eq!(eval_closed(&theta).unwrap(), &qint(2) * &qint(3));
        let id = LadderDiagram::new(2, vec![1, 1], vec![]);
        assert_eq!(eval_matrix(&id).unwrap(), RepSpace::new(2, 2).unwrap().identity(&id.source).unwrap());
        assert_eq!(eval_closed(&id), Err(Error::NotClosed));
    }

    #[test]
    fn unknots() {
        for n in 1..=4u32 {
            for k in 0..=n {
                assert_eq!(eval_closed(&unknot(n, k, 0)).unwrap(), qbinom(n as i64, k));
            }
        }
        let e = eval_closed(&braid_closure(2, 1, 1, &[]).unwrap()).unwrap();
        assert_eq!(e, qint(2));
    }

    #[test]
    fn twist_values() {
        for n in 2..=4u32 {
            assert_eq!(full_twist(1, n), -RingElem::q_pow(-(n as i32)));
            for k in 0..n as i32 {
                let ratio = &full_twist(k + 1, n) * &full_twist(k, n).unit_inverse().unwrap();
                assert_eq!(ratio, -RingElem::q_pow(2 * k - n as i32));
            }
        }
        assert!((&twist_coefficient(2, 3, -1) * &twist_coefficient(2, 3, 1)).is_one());
    }

    #[test]
    fn compose_checks_boundaries() {
        let up = LadderDiagram::new(2, vec![2, 0], vec![Layer::RungE(1, 1)]);
        let down = LadderDiagram::new(2, vec![1, 1], vec![Layer::RungF(1, 1)]);
        let c = compose(&up, &down).unwrap();
        assert_eq!(c.layers, vec![Layer::RungE(1, 1), Layer::RungF(1, 1)]);
        assert_eq!(compose(&up, &LadderDiagram::identity(&GlSequence::new(2, vec![1, 1]))).unwrap(), up);
        assert!(matches!(compose(&up, &up), Err(Error::BoundaryMismatch(_))));
    }
}
